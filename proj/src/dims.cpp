#include "shatterlab/dims.hpp"

#include "shatterlab/combinatorics.hpp"
#include "shatterlab/errors.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <unordered_set>

namespace shatterlab {

RankValue RankValue::parse(const std::string& s) {
    if (s == "-inf") return neg_inf();
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos == s.size() && v >= 0) return of(v);
    } catch (const std::exception&) {
    }
    throw InputError("malformed rank value '" + s + "'");
}

BigInt sauer_shelah_sum(std::uint64_t n, RankValue k) {
    if (k.is_neg_inf()) return 0;
    return binomial_prefix_sum(n, k.value());
}

namespace {

RankValue plus_one(RankValue r) { return r.is_neg_inf() ? r : RankValue::of(r.value() + 1); }

std::size_t floor_log2(std::size_t v) { return v == 0 ? 0 : static_cast<std::size_t>(std::bit_width(v) - 1); }

void check_universe(std::size_t universe, std::size_t cap, const char* name) {
    if (universe > cap) throw ResourceError(name, cap, universe);
}

std::vector<std::uint64_t> packed_sets(const SetSystem& F) {
    if (F.universe_size() > 64) throw ResourceError("vc_universe", 64, F.universe_size());
    std::vector<std::uint64_t> out;
    out.reserve(F.size());
    for (const auto& s : F.sets()) out.push_back(s.empty_set() ? 0 : s.words()[0]);
    return out;
}

std::size_t distinct_traces(const std::vector<std::uint64_t>& sets, std::uint64_t mask,
                            std::vector<std::uint64_t>& scratch) {
    scratch.clear();
    for (auto s : sets) scratch.push_back(s & mask);
    std::sort(scratch.begin(), scratch.end());
    return static_cast<std::size_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
}

// Representatives of the distinct nontrivial splits of `mask` by single
// elements; an element and one with the complementary column give the same
// split and only the first is kept.
std::vector<std::size_t> split_candidates(const std::vector<BitVec>& cols, const BitVec& mask) {
    std::vector<std::size_t> out;
    std::unordered_set<BitVec, BitVecHash> seen;
    for (std::size_t x = 0; x < cols.size(); ++x) {
        BitVec in = mask & cols[x];
        if (in.empty_set() || in == mask) continue;
        BitVec out_part = mask;
        out_part.and_not(cols[x]);
        if (seen.count(in) || seen.count(out_part)) continue;
        seen.insert(std::move(in));
        out.push_back(x);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- ElementTree

ElementTree::ElementTree(unsigned arity_exponent, std::size_t height, std::vector<std::vector<std::size_t>> labels)
    : s_(arity_exponent), height_(height), labels_(std::move(labels)) {
    if (s_ == 0 || s_ > 16) throw InputError("element tree arity exponent must be in [1, 16]");
    std::size_t total = 0;
    for (std::size_t d = 0; d < height_; ++d) {
        level_offset_.push_back(total);
        const std::size_t bits = d * s_;
        if (bits >= 40) throw ResourceError("element_tree_nodes", std::size_t{1} << 40, SIZE_MAX);
        total += std::size_t{1} << bits;
    }
    if (labels_.size() != total)
        throw InputError("element tree of height " + std::to_string(height_) + " needs " + std::to_string(total) +
                         " labels, got " + std::to_string(labels_.size()));
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i].size() != s_)
            throw InputError("element tree node " + std::to_string(i) + " label has " +
                             std::to_string(labels_[i].size()) + " entries, expected " + std::to_string(s_));
}

std::size_t ElementTree::node_index(std::span<const unsigned> path) const {
    if (path.size() >= height_) throw InputError("path of length " + std::to_string(path.size()) + " is a leaf");
    std::size_t within = 0;
    for (auto d : path) {
        if (d >= branching()) throw InputError("branch digit out of range");
        within = (within << s_) | d;
    }
    return level_offset_[path.size()] + within;
}

std::vector<unsigned> ElementTree::path_of(const BitVec& A) const {
    std::vector<unsigned> path;
    path.reserve(height_);
    std::size_t within = 0;
    for (std::size_t d = 0; d < height_; ++d) {
        const auto& lab = labels_[level_offset_[d] + within];
        unsigned sigma = 0;
        for (unsigned i = 0; i < s_; ++i)
            if (A.test(lab[i])) sigma |= 1u << i;
        path.push_back(sigma);
        within = (within << s_) | sigma;
    }
    return path;
}

bool ElementTree::properly_labels(const BitVec& A, std::span<const unsigned> leaf) const {
    if (leaf.size() != height_) return false;
    const auto p = path_of(A);
    return std::equal(p.begin(), p.end(), leaf.begin());
}

std::size_t ElementTree::properly_labeled_leaves(const SetSystem& F) const {
    std::vector<std::vector<unsigned>> paths;
    for (const auto& A : F.sets()) paths.push_back(path_of(A));
    std::sort(paths.begin(), paths.end());
    return static_cast<std::size_t>(std::unique(paths.begin(), paths.end()) - paths.begin());
}

ElementTree ElementTree::random(unsigned arity_exponent, std::size_t height, std::size_t universe,
                                std::uint64_t seed) {
    if (universe == 0 && height > 0) throw InputError("random element tree needs a nonempty universe");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, universe == 0 ? 0 : universe - 1);
    std::size_t total = 0;
    for (std::size_t d = 0; d < height; ++d) total += std::size_t{1} << (d * arity_exponent);
    std::vector<std::vector<std::size_t>> labels(total);
    for (auto& l : labels)
        for (unsigned i = 0; i < arity_exponent; ++i) l.push_back(pick(rng));
    return ElementTree(arity_exponent, height, std::move(labels));
}

// ----------------------------------------------------------------- RankEngine

RankEngine::RankEngine(const SetSystem& F) : F_(F) {
    cols_.reserve(F.universe_size());
    for (std::size_t x = 0; x < F.universe_size(); ++x) cols_.push_back(F.column(x));
}

BitVec RankEngine::child_mask(const BitVec& mask, std::span<const std::size_t> xs, unsigned sigma) const {
    BitVec m = mask;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if ((sigma >> i) & 1u)
            m &= cols_.at(xs[i]);
        else
            m.and_not(cols_.at(xs[i]));
    }
    return m;
}

RankValue RankEngine::thicket_dimension(const BitVec& mask) {
    const std::size_t count = mask.count();
    if (count == 0) return RankValue::neg_inf();
    if (count == 1) return RankValue::of(0);
    if (auto it = thicket_memo_.find(mask); it != thicket_memo_.end()) return it->second;

    // A height-k tree with every leaf labeled needs 2^k distinct members.
    const int upper = static_cast<int>(floor_log2(count));
    RankValue best = RankValue::of(0);
    for (auto x : split_candidates(cols_, mask)) {
        BitVec in = mask & cols_[x];
        BitVec out = mask;
        out.and_not(cols_[x]);
        if (std::min(in.count(), out.count()) < (std::size_t{1} << best.value())) continue;
        const RankValue a = thicket_dimension(out);
        if (a < best) continue;
        const RankValue b = thicket_dimension(in);
        best = std::max(best, plus_one(std::min(a, b)));
        if (best.value() == upper) break;
    }
    thicket_memo_.emplace(mask, best);
    return best;
}

std::uint64_t RankEngine::thicket_shatter(const BitVec& mask, std::size_t n) {
    const std::size_t count = mask.count();
    if (count == 0) return 0;
    if (n == 0) return 1;
    if (F_.universe_size() == 0) return 0;
    if (count == 1) return 1;
    auto key = std::make_pair(mask, n);
    if (auto it = rho_memo_.find(key); it != rho_memo_.end()) return it->second;

    const std::uint64_t ceiling = n >= 63 ? count : std::min<std::uint64_t>(count, std::uint64_t{1} << n);
    std::uint64_t best = 0;
    for (auto x : split_candidates(cols_, mask)) {
        BitVec in = mask & cols_[x];
        BitVec out = mask;
        out.and_not(cols_[x]);
        best = std::max(best, thicket_shatter(out, n - 1) + thicket_shatter(in, n - 1));
        if (best == ceiling) break;
    }
    rho_memo_.emplace(std::move(key), best);
    return best;
}

RankValue RankEngine::op_rank(const BitVec& mask, unsigned s) {
    if (s == 0) throw InputError("op_rank needs s >= 1");
    return op_rank_rec(mask, s, op_memo_[s]);
}

RankValue RankEngine::op_rank_rec(const BitVec& mask, unsigned s,
                                  std::unordered_map<BitVec, RankValue, BitVecHash>& memo) {
    const std::size_t count = mask.count();
    if (count == 0) return RankValue::neg_inf();
    const std::size_t fan = std::size_t{1} << s;
    if (F_.universe_size() < s || count < fan) return RankValue::of(0);
    if (auto it = memo.find(mask); it != memo.end()) return it->second;

    const int upper = static_cast<int>(floor_log2(count) / s);
    RankValue best = RankValue::of(0);
    // A repeated element, an element splitting `mask` trivially, or two
    // elements inducing the same split always leave some child empty.
    const auto cand = split_candidates(cols_, mask);
    std::vector<std::size_t> xs(s);
    for_each_combination(cand.size(), s, [&](std::span<const std::size_t> pick) {
        for (unsigned i = 0; i < s; ++i) xs[i] = cand[pick[i]];
        std::vector<BitVec> children;
        children.reserve(fan);
        for (unsigned sigma = 0; sigma < fan; ++sigma) {
            BitVec c = child_mask(mask, xs, sigma);
            if (c.count() < (std::size_t{1} << (s * static_cast<unsigned>(best.value())))) return true;
            children.push_back(std::move(c));
        }
        std::sort(children.begin(), children.end(),
                  [](const BitVec& a, const BitVec& b) { return a.count() < b.count(); });
        RankValue low = RankValue::of(upper);
        for (const auto& c : children) {
            low = std::min(low, op_rank_rec(c, s, memo));
            if (plus_one(low) <= best) return true;
        }
        best = std::max(best, plus_one(low));
        return best.value() < upper;
    });
    memo.emplace(mask, best);
    return best;
}

std::uint64_t RankEngine::op_shatter(const BitVec& mask, unsigned s, std::size_t n) {
    if (s == 0) throw InputError("op_shatter needs s >= 1");
    const std::size_t count = mask.count();
    if (count == 0) return 0;
    if (n == 0) return 1;
    if (F_.universe_size() == 0) return 0;
    if (count == 1) return 1;
    auto& memo = psi_memo_[s];
    auto key = std::make_pair(mask, n);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    // Refining the partition of `mask` never lowers the sum over children
    // (leaves labeled by A u B are those labeled by A or by B), so tuples of
    // distinct split representatives suffice; fewer than s representatives
    // are padded by repeats, which add no refinement.
    const auto cand = split_candidates(cols_, mask);
    const std::size_t width = std::min<std::size_t>(s, cand.size());
    const std::uint64_t ceiling = n * s >= 63 ? count : std::min<std::uint64_t>(count, std::uint64_t{1} << (n * s));
    std::uint64_t best = 0;
    std::vector<std::size_t> xs(width);
    for_each_combination(cand.size(), width, [&](std::span<const std::size_t> pick) {
        for (std::size_t i = 0; i < width; ++i) xs[i] = cand[pick[i]];
        std::uint64_t total = 0;
        for (unsigned sigma = 0; sigma < (1u << width); ++sigma) {
            BitVec c = child_mask(mask, xs, sigma);
            if (!c.empty_set()) total += op_shatter(c, s, n - 1);
        }
        best = std::max(best, total);
        return best < ceiling;
    });
    memo.emplace(std::move(key), best);
    return best;
}

// ------------------------------------------------------------ free functions

bool shatters(const SetSystem& F, std::span<const std::size_t> Y) {
    const SetSystem p = project(F, Y);
    const std::size_t y = p.universe_size();
    if (y >= 63) return false;
    return p.size() == (std::size_t{1} << y);
}

std::vector<std::size_t> vc_witness(const SetSystem& F, const Caps& caps) {
    check_universe(F.universe_size(), caps.vc_universe, "vc_universe");
    std::vector<std::size_t> witness;
    if (F.empty()) return witness;
    const auto sets = packed_sets(F);
    std::vector<std::uint64_t> scratch;
    const std::size_t limit = std::min(F.universe_size(), floor_log2(F.size()));
    for (std::size_t d = 1; d <= limit; ++d) {
        bool found = false;
        for_each_combination(F.universe_size(), d, [&](std::span<const std::size_t> Y) {
            std::uint64_t mask = 0;
            for (auto y : Y) mask |= std::uint64_t{1} << y;
            if (distinct_traces(sets, mask, scratch) == (std::size_t{1} << d)) {
                witness.assign(Y.begin(), Y.end());
                found = true;
                return false;
            }
            return true;
        });
        // Subsets of shattered sets are shattered, so the first miss is final.
        if (!found) break;
    }
    return witness;
}

RankValue vc_dimension(const SetSystem& F, const Caps& caps) {
    check_universe(F.universe_size(), caps.vc_universe, "vc_universe");
    if (F.empty()) return RankValue::neg_inf();
    return RankValue::of(static_cast<int>(vc_witness(F, caps).size()));
}

std::uint64_t vc_shatter_function(const SetSystem& F, std::size_t n, const Caps& caps) {
    check_universe(F.universe_size(), caps.vc_universe, "vc_universe");
    if (n > F.universe_size())
        throw InputError("shatter function argument " + std::to_string(n) + " exceeds universe size " +
                         std::to_string(F.universe_size()));
    if (F.empty()) return 0;
    const auto sets = packed_sets(F);
    const std::uint64_t ceiling = n >= 63 ? F.size() : std::min<std::uint64_t>(F.size(), std::uint64_t{1} << n);
    std::uint64_t best = 0;
    std::vector<std::uint64_t> scratch;
    for_each_combination(F.universe_size(), n, [&](std::span<const std::size_t> Y) {
        std::uint64_t mask = 0;
        for (auto y : Y) mask |= std::uint64_t{1} << y;
        best = std::max<std::uint64_t>(best, distinct_traces(sets, mask, scratch));
        return best < ceiling;
    });
    return best;
}

RankValue thicket_dimension(const SetSystem& F) {
    RankEngine e(F);
    return e.thicket_dimension(e.all());
}

std::uint64_t thicket_shatter(const SetSystem& F, std::size_t n) {
    RankEngine e(F);
    return e.thicket_shatter(e.all(), n);
}

RankValue op_rank(const SetSystem& F, unsigned s, const Caps& caps) {
    check_universe(F.universe_size(), caps.op_universe, "op_universe");
    RankEngine e(F);
    return e.op_rank(e.all(), s);
}

std::uint64_t op_shatter(const SetSystem& F, unsigned s, std::size_t n, const Caps& caps) {
    check_universe(F.universe_size(), caps.op_universe, "op_universe");
    RankEngine e(F);
    return e.op_shatter(e.all(), s, n);
}

std::vector<RankValue> rank_profile(const SetSystem& F, unsigned s, const Caps& caps) {
    check_universe(F.universe_size(), caps.op_universe, "op_universe");
    RankEngine e(F);
    std::vector<RankValue> out;
    for (unsigned r = 1; r <= s; ++r) out.push_back(e.op_rank(e.all(), r));
    return out;
}

std::size_t count_children_dropping(const SetSystem& F, std::span<const std::size_t> xs, unsigned r, unsigned l,
                                    const Caps& caps) {
    check_universe(F.universe_size(), caps.op_universe, "op_universe");
    if (xs.size() > 16) throw InputError("tuple too long");
    for (auto x : xs)
        if (x >= F.universe_size()) throw InputError("tuple element " + std::to_string(x) + " outside universe");
    RankEngine e(F);
    const BitVec all = e.all();
    const RankValue a = e.op_rank(all, r);
    if (a.is_neg_inf()) throw InputError("count_children_dropping needs a nonempty family");
    const RankValue threshold =
        a.value() >= static_cast<int>(l) ? RankValue::of(a.value() - static_cast<int>(l)) : RankValue::neg_inf();
    std::size_t count = 0;
    for (unsigned sigma = 0; sigma < (1u << xs.size()); ++sigma)
        if (e.op_rank(e.child_mask(all, xs, sigma), r) <= threshold) ++count;
    return count;
}

BigInt children_dropping_lower_bound(unsigned s, unsigned r, unsigned l) {
    const BigInt total = ipow(BigInt(2), s);
    const BigInt sub = binomial_prefix_sum(s, static_cast<long long>(l) * r - 1);
    return total > sub ? BigInt(total - sub) : BigInt(0);
}

// -------------------------------------------------------------------- audit

bool BoundAuditReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass; });
}

std::vector<const BoundRow*> BoundAuditReport::failures() const {
    std::vector<const BoundRow*> out;
    for (const auto& r : rows)
        if (!r.pass) out.push_back(&r);
    return out;
}

namespace {

BoundRow count_row(std::string name, std::vector<std::pair<std::string, std::string>> params, const BigInt& lhs,
                   const BigInt& rhs) {
    BoundRow row;
    row.bound = std::move(name);
    row.params = std::move(params);
    row.lhs = lhs.str();
    row.rhs = rhs.str();
    row.pass = lhs <= rhs;
    return row;
}

BoundRow rank_row(std::string name, std::vector<std::pair<std::string, std::string>> params, RankValue lhs,
                  RankValue rhs) {
    BoundRow row;
    row.bound = std::move(name);
    row.params = std::move(params);
    row.lhs = lhs.to_string();
    row.rhs = rhs.to_string();
    row.pass = lhs <= rhs;
    return row;
}

std::string str(std::uint64_t v) { return std::to_string(v); }

}  // namespace

BoundAuditReport audit_bounds(const SetSystem& F, unsigned s, unsigned r, std::size_t n, const Caps& caps) {
    if (s == 0 || r == 0) throw InputError("audit_bounds needs s >= 1 and r >= 1");
    check_universe(F.universe_size(), caps.vc_universe, "vc_universe");
    check_universe(F.universe_size(), caps.op_universe, "op_universe");

    BoundAuditReport rep;
    RankEngine e(F);
    const BitVec all = e.all();

    const RankValue d = vc_dimension(F, caps);
    const RankValue k_thicket = e.thicket_dimension(all);
    const RankValue k_s = e.op_rank(all, s);
    const RankValue k_r = e.op_rank(all, r);

    const BigInt a0 = binomial_prefix_sum(s, static_cast<long long>(r) - 1);
    const BigInt a1 = ipow(BigInt(2), s) - a0;
    const BigInt base_s = ipow(BigInt(2), s) - 1;

    for (std::size_t m = 0; m <= n; ++m) {
        if (m <= F.universe_size())
            rep.rows.push_back(count_row("sauer_shelah_vc", {{"n", str(m)}, {"d", d.to_string()}},
                                         vc_shatter_function(F, m, caps), sauer_shelah_sum(m, d)));

        rep.rows.push_back(count_row("thicket_sauer_shelah", {{"n", str(m)}, {"k", k_thicket.to_string()}},
                                     e.thicket_shatter(all, m), sauer_shelah_sum(m, k_thicket)));

        const std::uint64_t psi = e.op_shatter(all, s, m);
        BigInt rhs_c = 0;
        if (!k_s.is_neg_inf())
            for (int i = 0; i <= k_s.value() && static_cast<std::size_t>(i) <= m; ++i)
                rhs_c += ipow(base_s, m - i) * binomial(m, i);
        rep.rows.push_back(count_row("op_shatter_rank",
                                     {{"s", str(s)}, {"n", str(m)}, {"k", k_s.to_string()}}, psi, rhs_c));

        if (k_r == RankValue::of(0))
            rep.rows.push_back(count_row("op_shatter_rank_zero", {{"s", str(s)}, {"r", str(r)}, {"n", str(m)}},
                                         psi, ipow(a0, m)));

        BigInt rhs_g = 0;
        if (!k_r.is_neg_inf())
            for (int i = 0; i <= k_r.value() && static_cast<std::size_t>(i) <= m; ++i)
                rhs_g += binomial(m, i) * ipow(a0, m - i) * ipow(a1, i);
        rep.rows.push_back(count_row("op_shatter_recurrence",
                                     {{"s", str(s)},
                                      {"r", str(r)},
                                      {"n", str(m)},
                                      {"b", k_r.to_string()},
                                      {"a0", a0.str()},
                                      {"a1", a1.str()}},
                                     psi, rhs_g));
    }

    std::vector<RankValue> profile;
    for (unsigned q = 1; q <= s; ++q) profile.push_back(e.op_rank(all, q));
    for (unsigned s1 = 1; s1 <= s; ++s1)
        for (unsigned s2 = s1 + 1; s2 <= s; ++s2) {
            const RankValue r2 = profile[s2 - 1];
            const RankValue scaled = r2.is_neg_inf() ? r2 : RankValue::of(static_cast<int>(s2 / s1) * r2.value());
            rep.rows.push_back(rank_row("op_rank_ratio", {{"s1", str(s1)}, {"s2", str(s2)}}, scaled,
                                        profile[s1 - 1]));
        }

    for (unsigned q = 1; q <= s; ++q) {
        RankValue worst = RankValue::neg_inf();
        for (std::size_t i = 0; i < F.size(); ++i) {
            BitVec sub = all;
            sub.set(i, false);
            worst = std::max(worst, e.op_rank(sub, q));
        }
        rep.rows.push_back(rank_row("subfamily_monotone", {{"s", str(q)}, {"subfamilies", str(F.size())}}, worst,
                                    profile[q - 1]));
    }
    return rep;
}

}  // namespace shatterlab
