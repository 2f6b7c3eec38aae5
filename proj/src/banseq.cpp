#include "shatterlab/banseq.hpp"

#include "shatterlab/combinatorics.hpp"
#include "shatterlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <unordered_set>

namespace shatterlab {

// ------------------------------------------------------------------- shapes

std::uint64_t BanShape::patterns() const { return upow(j, k); }
std::uint64_t BanShape::contexts() const { return upow(j, n - k); }
std::uint64_t BanShape::sequences() const { return upow(j, n); }
std::uint64_t BanShape::subset_count() const {
    return static_cast<std::uint64_t>(binomial(n, k));
}

namespace {

void check_shape(const BanShape& s) {
    if (s.j < 2 || s.j > 36) throw InputError("alphabet size j must be in [2, 36], got " + std::to_string(s.j));
    if (s.k < 1 || s.k > s.n)
        throw InputError("fold k must satisfy 1 <= k <= n (k = " + std::to_string(s.k) +
                         ", n = " + std::to_string(s.n) + ")");
    if (s.n > 40) throw InputError("length n = " + std::to_string(s.n) + " is too large");
    double bits = 0;
    for (unsigned j = s.j; j > 1; j >>= 1) bits += 1;
    if (bits * s.n > 62 && s.j != 2) throw InputError("j^n does not fit in 62 bits");
}

std::size_t log2_ceil(std::uint64_t v) {
    std::size_t b = 0;
    while ((std::uint64_t{1} << b) < v && b < 63) ++b;
    return b;
}

void check_sequence_cap(const BanShape& s, const Caps& caps) {
    // j^n <= 2^cap, computed without overflow.
    long double log2 = 0;
    for (unsigned i = 0; i < s.n; ++i) log2 += std::log2(static_cast<long double>(s.j));
    if (log2 > static_cast<long double>(caps.sequence_log2) + 1e-9)
        throw ResourceError("sequence_log2", caps.sequence_log2, static_cast<std::size_t>(std::ceil(log2)));
}

std::vector<unsigned> decode(std::uint64_t code, unsigned length, unsigned j) {
    std::vector<unsigned> d(length);
    for (unsigned i = length; i-- > 0;) {
        d[i] = static_cast<unsigned>(code % j);
        code /= j;
    }
    return d;
}

std::uint64_t encode(const std::vector<unsigned>& digits, unsigned j) {
    std::uint64_t c = 0;
    for (auto d : digits) c = c * j + d;
    return c;
}

// Code of the digits of `seq` at `positions`.
std::uint64_t gather(const std::vector<unsigned>& seq, const std::vector<unsigned>& positions, unsigned j) {
    std::uint64_t c = 0;
    for (auto p : positions) c = c * j + seq[p];
    return c;
}

// Full sequence from a context on `rest` and a pattern on `S`.
std::vector<unsigned> merge(const BanShape& shape, const std::vector<unsigned>& S, std::uint64_t x,
                            std::uint64_t z) {
    std::vector<unsigned> rest;
    for (unsigned p = 0, i = 0; p < shape.n; ++p) {
        if (i < S.size() && S[i] == p)
            ++i;
        else
            rest.push_back(p);
    }
    const auto xd = decode(x, static_cast<unsigned>(rest.size()), shape.j);
    const auto zd = decode(z, static_cast<unsigned>(S.size()), shape.j);
    std::vector<unsigned> seq(shape.n);
    for (std::size_t i = 0; i < rest.size(); ++i) seq[rest[i]] = xd[i];
    for (std::size_t i = 0; i < S.size(); ++i) seq[S[i]] = zd[i];
    return seq;
}

}  // namespace

SubsetIndex::SubsetIndex(unsigned n, unsigned k) {
    for_each_combination(n, k, [&](std::span<const std::size_t> c) {
        std::uint64_t m = 0;
        std::vector<unsigned> pos, comp;
        for (auto p : c) {
            m |= std::uint64_t{1} << p;
            pos.push_back(static_cast<unsigned>(p));
        }
        for (unsigned p = 0; p < n; ++p)
            if (!((m >> p) & 1u)) comp.push_back(p);
        lookup_.emplace_back(m, masks_.size());
        masks_.push_back(m);
        positions_.push_back(std::move(pos));
        complement_.push_back(std::move(comp));
        return true;
    });
    std::sort(lookup_.begin(), lookup_.end());
}

std::size_t SubsetIndex::index_of(std::uint64_t mask) const {
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(mask, std::size_t{0}));
    if (it == lookup_.end() || it->first != mask) throw InputError("not a subset of the required size");
    return it->second;
}

// ---------------------------------------------------------- RelaxedBanProblem

struct RelaxedBanProblem::Impl {
    BanShape shape;
    Oracle oracle;
    std::string origin;
    SubsetIndex subsets;
    std::uint64_t patterns = 0, contexts = 0;
    std::size_t words = 0;

    std::mutex dense_mutex;
    bool dense_ready = false;
    std::vector<std::uint64_t> dense;

    Impl(BanShape s, Oracle o, std::string org)
        : shape(s), oracle(std::move(o)), origin(std::move(org)), subsets(s.n, s.k) {
        patterns = s.patterns();
        contexts = s.contexts();
        words = (patterns + 63) / 64;
    }

    const std::uint64_t* row(std::size_t idx, std::uint64_t x) const {
        return dense.data() + (idx * contexts + x) * words;
    }
};

RelaxedBanProblem::RelaxedBanProblem(BanShape shape, Oracle oracle, std::string origin) {
    check_shape(shape);
    impl_ = std::make_shared<Impl>(shape, std::move(oracle), std::move(origin));
}

RelaxedBanProblem RelaxedBanProblem::from_entries(BanShape shape, std::vector<BitVec> entries, std::string origin) {
    check_shape(shape);
    const SubsetIndex idx(shape.n, shape.k);
    const std::uint64_t contexts = shape.contexts();
    if (entries.size() != idx.size() * contexts)
        throw InputError("ban table has " + std::to_string(entries.size()) + " entries, expected " +
                         std::to_string(idx.size() * contexts));
    for (const auto& e : entries)
        if (e.size() != shape.patterns()) throw InputError("ban set has wrong pattern count");
    auto table = std::make_shared<const std::vector<BitVec>>(std::move(entries));
    auto lookup = std::make_shared<const SubsetIndex>(idx);
    Oracle o = [table, lookup, contexts](std::span<const unsigned> S, std::uint64_t x) {
        std::uint64_t m = 0;
        for (auto p : S) m |= std::uint64_t{1} << p;
        return (*table)[lookup->index_of(m) * contexts + x];
    };
    return RelaxedBanProblem(shape, std::move(o), std::move(origin));
}

const BanShape& RelaxedBanProblem::shape() const noexcept { return impl_->shape; }
const std::string& RelaxedBanProblem::origin() const noexcept { return impl_->origin; }
const SubsetIndex& RelaxedBanProblem::subsets() const noexcept { return impl_->subsets; }

BitVec RelaxedBanProblem::bans(std::span<const unsigned> S, std::uint64_t x) const {
    const auto& sh = impl_->shape;
    if (S.size() != sh.k) throw InputError("subset has " + std::to_string(S.size()) + " elements, fold is " +
                                           std::to_string(sh.k));
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (S[i] >= sh.n) throw InputError("subset index " + std::to_string(S[i]) + " out of range");
        if (i && S[i] <= S[i - 1]) throw InputError("subset must be strictly ascending");
    }
    if (x >= impl_->contexts) throw InputError("context code out of range");
    BitVec b = impl_->oracle(S, x);
    if (b.size() != impl_->patterns) throw InputError("oracle returned a ban set of the wrong size");
    return b;
}

BitVec RelaxedBanProblem::bans_at(std::size_t subset_idx, std::uint64_t x) const {
    const auto& pos = impl_->subsets.positions(subset_idx);
    return bans(pos, x);
}

void RelaxedBanProblem::materialize(const Caps& caps) const {
    std::lock_guard lock(impl_->dense_mutex);
    if (impl_->dense_ready) return;
    const std::uint64_t entries = impl_->subsets.size() * impl_->contexts;
    const std::size_t cap_log2 = caps.sequence_log2 + 2;
    if (log2_ceil(entries * impl_->words) > cap_log2)
        throw ResourceError("sequence_log2", caps.sequence_log2, log2_ceil(entries * impl_->words) - 2);
    std::vector<std::uint64_t> dense(entries * impl_->words, 0);
    for (std::size_t i = 0; i < impl_->subsets.size(); ++i)
        for (std::uint64_t x = 0; x < impl_->contexts; ++x) {
            const BitVec b = bans_at(i, x);
            std::copy(b.words().begin(), b.words().end(), dense.begin() + (i * impl_->contexts + x) * impl_->words);
        }
    impl_->dense = std::move(dense);
    impl_->dense_ready = true;
}

bool RelaxedBanProblem::banned(std::size_t subset_idx, std::uint64_t x, std::uint64_t z) const {
    if (!impl_->dense_ready) materialize();
    return (impl_->row(subset_idx, x)[z >> 6] >> (z & 63)) & 1u;
}

bool RelaxedBanProblem::has_empty_ban_set(const Caps& caps) const {
    materialize(caps);
    for (std::size_t i = 0; i < impl_->subsets.size(); ++i)
        for (std::uint64_t x = 0; x < impl_->contexts; ++x) {
            const std::uint64_t* r = impl_->row(i, x);
            if (std::all_of(r, r + impl_->words, [](std::uint64_t w) { return w == 0; })) return true;
        }
    return false;
}

BanProblem::BanProblem(RelaxedBanProblem relaxed, const Caps& caps) : relaxed_(std::move(relaxed)) {
    relaxed_.materialize(caps);
    const auto& sub = relaxed_.subsets();
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (std::uint64_t x = 0; x < relaxed_.shape().contexts(); ++x) {
            bool any = false;
            for (std::uint64_t z = 0; z < relaxed_.shape().patterns() && !any; ++z) any = relaxed_.banned(i, x, z);
            if (!any) {
                std::string S;
                for (auto p : sub.positions(i)) S += (S.empty() ? "" : ",") + std::to_string(p);
                throw InputError("empty ban set at S = {" + S + "}, X = " +
                                 sequence_to_string(x, relaxed_.n() - relaxed_.k(), relaxed_.j()));
            }
        }
}

// --------------------------------------------------------------- sequences

std::string sequence_to_string(std::uint64_t code, unsigned length, unsigned j) {
    static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string s(length, '0');
    for (unsigned i = length; i-- > 0;) {
        s[i] = kDigits[code % j];
        code /= j;
    }
    return s;
}

std::uint64_t sequence_from_string(const std::string& s, unsigned j) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char ch = s[i];
        unsigned d;
        if (ch >= '0' && ch <= '9')
            d = static_cast<unsigned>(ch - '0');
        else if (ch >= 'a' && ch <= 'z')
            d = static_cast<unsigned>(ch - 'a' + 10);
        else
            throw InputError("bad digit '" + std::string(1, ch) + "' at position " + std::to_string(i) + " of '" + s +
                             "'");
        if (d >= j)
            throw InputError("digit '" + std::string(1, ch) + "' at position " + std::to_string(i) + " of '" + s +
                             "' exceeds alphabet " + std::to_string(j));
        c = c * j + d;
    }
    return c;
}

// ----------------------------------------------------------------- solving

namespace {

struct PlaceValues {
    // x = sum seq[p] * wx[p], z = sum seq[p] * wz[p]
    std::vector<std::uint64_t> wx, wz;
};

std::vector<PlaceValues> place_values(const RelaxedBanProblem& f) {
    const auto& sub = f.subsets();
    std::vector<PlaceValues> pv(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        pv[i].wx.assign(f.n(), 0);
        pv[i].wz.assign(f.n(), 0);
        std::uint64_t w = 1;
        const auto& comp = sub.complement(i);
        for (std::size_t q = comp.size(); q-- > 0;) {
            pv[i].wx[comp[q]] = w;
            w *= f.j();
        }
        w = 1;
        const auto& pos = sub.positions(i);
        for (std::size_t q = pos.size(); q-- > 0;) {
            pv[i].wz[pos[q]] = w;
            w *= f.j();
        }
    }
    return pv;
}

bool banned_sequence(const RelaxedBanProblem& f, const std::vector<PlaceValues>& pv,
                     const std::vector<unsigned>& seq) {
    for (std::size_t i = 0; i < pv.size(); ++i) {
        std::uint64_t x = 0, z = 0;
        for (unsigned p = 0; p < seq.size(); ++p) {
            x += seq[p] * pv[i].wx[p];
            z += seq[p] * pv[i].wz[p];
        }
        if (f.banned(i, x, z)) return true;
    }
    return false;
}

}  // namespace

SolveResult solutions(const RelaxedBanProblem& f, const Caps& caps) {
    check_sequence_cap(f.shape(), caps);
    f.materialize(caps);
    const auto pv = place_values(f);
    SolveResult r;
    std::vector<unsigned> seq(f.n(), 0);
    const std::uint64_t total = f.shape().sequences();
    for (std::uint64_t code = 0; code < total; ++code) {
        if (banned_sequence(f, pv, seq))
            ++r.banned;
        else
            r.solutions.push_back(code);
        for (unsigned p = f.n(); p-- > 0;) {
            if (++seq[p] < f.j()) break;
            seq[p] = 0;
        }
    }
    return r;
}

std::uint64_t banned_count(const RelaxedBanProblem& f, const Caps& caps) { return solutions(f, caps).banned; }

bool is_solution(const RelaxedBanProblem& f, std::uint64_t sequence) {
    if (sequence >= f.shape().sequences()) throw InputError("sequence code out of range");
    return !banned_sequence(f, place_values(f), decode(sequence, f.n(), f.j()));
}

BigInt trivial_upper_bound(const BanShape& s) {
    return (ipow(BigInt(s.j), s.k) - 1) * ipow(BigInt(s.j), s.n - s.k);
}

BigInt main_theorem_bound(const BanShape& s) {
    BigInt total = 0;
    for (unsigned i = 0; i < s.k; ++i) total += ipow(BigInt(s.j - 1), s.n - i) * binomial(s.n, i);
    return total;
}

// -------------------------------------------------------------- hereditary

namespace {

class WitnessGame {
public:
    WitnessGame(const RelaxedBanProblem& f, std::size_t subset_idx)
        : f_(f), idx_(subset_idx), in_s_(f.n(), false), seq_(f.n(), 0) {
        for (auto p : f.subsets().positions(idx_)) in_s_[p] = true;
    }

    // True iff a witness exists below the current prefix of length pos.
    bool win(unsigned pos) {
        if (pos == f_.n()) return leaf_unbanned();
        if (in_s_[pos]) {
            for (unsigned v = 0; v < f_.j(); ++v) {
                seq_[pos] = v;
                if (!win(pos + 1)) return false;
            }
            return true;
        }
        for (unsigned v = 0; v < f_.j(); ++v) {
            seq_[pos] = v;
            if (win(pos + 1)) return true;
        }
        return false;
    }

    // Precondition: win(pos) is true for the current prefix.
    void collect(unsigned pos, std::vector<std::pair<std::uint64_t, std::uint64_t>>& out) {
        if (pos == f_.n()) {
            out.emplace_back(gather(seq_, f_.subsets().positions(idx_), f_.j()),
                             gather(seq_, f_.subsets().complement(idx_), f_.j()));
            return;
        }
        if (in_s_[pos]) {
            for (unsigned v = 0; v < f_.j(); ++v) {
                seq_[pos] = v;
                collect(pos + 1, out);
            }
            return;
        }
        for (unsigned v = 0; v < f_.j(); ++v) {
            seq_[pos] = v;
            if (win(pos + 1)) {
                seq_[pos] = v;
                collect(pos + 1, out);
                return;
            }
        }
    }

private:
    bool leaf_unbanned() const {
        const auto z = gather(seq_, f_.subsets().positions(idx_), f_.j());
        const auto x = gather(seq_, f_.subsets().complement(idx_), f_.j());
        return !f_.banned(idx_, x, z);
    }

    const RelaxedBanProblem& f_;
    std::size_t idx_;
    std::vector<bool> in_s_;
    std::vector<unsigned> seq_;
};

}  // namespace

HereditaryResult is_hereditary(const RelaxedBanProblem& f, const Caps& caps) {
    check_sequence_cap(f.shape(), caps);
    f.materialize(caps);
    HereditaryResult res;
    for (std::size_t i = 0; i < f.subsets().size(); ++i) {
        WitnessGame game(f, i);
        if (!game.win(0)) continue;
        HereditaryWitness w;
        w.S = f.subsets().positions(i);
        game.collect(0, w.assignments);
        std::sort(w.assignments.begin(), w.assignments.end());
        res.hereditary = false;
        res.witness = std::move(w);
        return res;
    }
    return res;
}

bool validate_witness(const RelaxedBanProblem& f, const HereditaryWitness& w) {
    const auto& sh = f.shape();
    if (w.S.size() != sh.k) return false;
    for (std::size_t i = 0; i < w.S.size(); ++i)
        if (w.S[i] >= sh.n || (i && w.S[i] <= w.S[i - 1])) return false;
    if (w.assignments.size() != sh.patterns()) return false;
    std::vector<bool> seen(sh.patterns(), false);
    std::vector<std::vector<unsigned>> seqs;
    for (const auto& [z, x] : w.assignments) {
        if (z >= sh.patterns() || x >= sh.contexts() || seen[z]) return false;
        seen[z] = true;
        if (f.bans(w.S, x).test(z)) return false;
        seqs.push_back(merge(sh, w.S, x, z));
    }
    std::vector<bool> in_s(sh.n, false);
    for (auto p : w.S) in_s[p] = true;
    for (std::size_t a = 0; a < seqs.size(); ++a)
        for (std::size_t b = a + 1; b < seqs.size(); ++b) {
            unsigned p = 0;
            while (p < sh.n && seqs[a][p] == seqs[b][p]) ++p;
            if (p == sh.n || !in_s[p]) return false;
        }
    return true;
}

bool is_independent(const RelaxedBanProblem& f, const Caps& caps) {
    f.materialize(caps);
    for (std::size_t i = 0; i < f.subsets().size(); ++i) {
        const BitVec first = f.bans_at(i, 0);
        for (std::uint64_t x = 1; x < f.shape().contexts(); ++x)
            if (!(f.bans_at(i, x) == first)) return false;
    }
    return true;
}

// -------------------------------------------------------------- reductions

RelaxedBanProblem reduce_hat(const RelaxedBanProblem& f) {
    if (f.k() < 2 || f.n() < 2) throw InputError("reduce_hat needs k >= 2 and n >= 2");
    const BanShape shape{f.n() - 1, f.k() - 1, f.j()};
    const unsigned last = f.n() - 1;
    const unsigned j = f.j();
    const std::uint64_t patterns = shape.patterns();
    RelaxedBanProblem parent = f;
    auto oracle = [parent, last, j, patterns](std::span<const unsigned> T, std::uint64_t x) {
        std::vector<unsigned> S(T.begin(), T.end());
        S.push_back(last);
        const BitVec full = parent.bans(S, x);
        BitVec out(patterns);
        for (std::uint64_t z = 0; z < patterns; ++z)
            for (unsigned l = 0; l < j; ++l)
                if (full.test(z * j + l)) {
                    out.set(z);
                    break;
                }
        return out;
    };
    return RelaxedBanProblem(shape, std::move(oracle), "hat(" + f.origin() + ")");
}

RelaxedBanProblem reduce_prime(const RelaxedBanProblem& f) {
    if (f.k() < 1 || f.n() < 2 || f.k() > f.n() - 1)
        throw InputError("reduce_prime needs n >= 2 and 1 <= k <= n - 1");
    const BanShape shape{f.n() - 1, f.k(), f.j()};
    const unsigned j = f.j();
    RelaxedBanProblem parent = f;
    auto oracle = [parent, j](std::span<const unsigned> S, std::uint64_t x) {
        BitVec out = parent.bans(S, x * j);
        for (unsigned l = 1; l < j; ++l) out &= parent.bans(S, x * j + l);
        return out;
    };
    return RelaxedBanProblem(shape, std::move(oracle), "prime(" + f.origin() + ")");
}

CountingReport check_counting_inequality(const RelaxedBanProblem& f, const Caps& caps) {
    if (f.k() < 2) throw InputError("counting inequality needs k >= 2");
    CountingReport r;
    r.j = f.j();
    r.banned = banned_count(f, caps);
    r.banned_hat = banned_count(reduce_hat(f), caps);
    if (f.k() <= f.n() - 1)
        r.banned_prime = banned_count(reduce_prime(f), caps);
    else
        r.prime_defined = false;
    r.holds = r.banned >= r.banned_hat + static_cast<std::uint64_t>(f.j() - 1) * r.banned_prime;
    return r;
}

MainTheoremReport verify_main_theorem(const RelaxedBanProblem& f, const Caps& caps) {
    MainTheoremReport r;
    const auto h = is_hereditary(f, caps);
    r.hereditary = h.hereditary;
    r.witness = h.witness;
    r.solutions = solutions(f, caps).solutions.size();
    r.bound = main_theorem_bound(f.shape());
    r.within_bound = BigInt(r.solutions) <= r.bound;
    return r;
}

// ----------------------------------------------------------------- hitting

namespace {

class HittingSearch {
public:
    HittingSearch(unsigned n, unsigned k) : n_(n), points_(std::uint64_t{1} << n) {
        for_each_combination(n, k, [&](std::span<const std::size_t> S) {
            std::uint64_t free_mask = 0;
            for (auto p : S) free_mask |= std::uint64_t{1} << (n - 1 - p);  // bit of position p in a code
            for (std::uint64_t base = 0; base < points_; ++base) {
                if (base & free_mask) continue;
                std::uint64_t cube = 0;
                // enumerate subsets of free_mask
                std::uint64_t sub = 0;
                do {
                    cube |= std::uint64_t{1} << (base | sub);
                    sub = (sub - free_mask) & free_mask;
                } while (sub != 0);
                cubes_.push_back(cube);
            }
            return true;
        });
        per_point_ = static_cast<std::size_t>(binomial(n, k));
        cover_.assign(points_, BitVec(cubes_.size()));
        for (std::size_t c = 0; c < cubes_.size(); ++c)
            for (std::uint64_t p = 0; p < points_; ++p)
                if ((cubes_[c] >> p) & 1u) cover_[p].set(c);
    }

    HittingResult solve() {
        // Greedy start for the upper bound.
        BitVec unhit = BitVec::full(cubes_.size());
        std::vector<std::uint64_t> greedy;
        while (!unhit.empty_set()) {
            std::uint64_t best_p = 0;
            std::size_t best_c = 0;
            for (std::uint64_t p = 0; p < points_; ++p) {
                const std::size_t c = (unhit & cover_[p]).count();
                if (c > best_c) best_c = c, best_p = p;
            }
            greedy.push_back(best_p);
            unhit.and_not(cover_[best_p]);
        }
        best_ = greedy;
        // The cube family is invariant under translation, so some optimum
        // contains the all-zero sequence.
        BitVec start = BitVec::full(cubes_.size());
        start.and_not(cover_[0]);
        std::vector<std::uint64_t> chosen{0};
        dfs(start, chosen, 0);
        return HittingResult{best_.size(), best_};
    }

private:
    void dfs(const BitVec& unhit, std::vector<std::uint64_t>& chosen, std::uint64_t forbidden) {
        if (unhit.empty_set()) {
            if (chosen.size() < best_.size()) best_ = chosen;
            return;
        }
        const std::size_t remaining = unhit.count();
        const std::size_t lb = (remaining + per_point_ - 1) / per_point_;
        if (chosen.size() + lb >= best_.size()) return;
        // Branch on the unhit cube with the fewest allowed points.
        std::size_t pick = SIZE_MAX;
        int fewest = 65;
        for (auto c : unhit.indices()) {
            const int allowed = std::popcount(cubes_[c] & ~forbidden);
            if (allowed < fewest) fewest = allowed, pick = c;
            if (fewest <= 1) break;
        }
        if (fewest == 0) return;
        std::uint64_t options = cubes_[pick] & ~forbidden;
        std::uint64_t local_forbidden = forbidden;
        while (options) {
            const std::uint64_t p = static_cast<std::uint64_t>(std::countr_zero(options));
            options &= options - 1;
            BitVec next = unhit;
            next.and_not(cover_[p]);
            chosen.push_back(p);
            dfs(next, chosen, local_forbidden);
            chosen.pop_back();
            local_forbidden |= std::uint64_t{1} << p;
        }
    }

    unsigned n_;
    std::uint64_t points_;
    std::size_t per_point_ = 1;
    std::vector<std::uint64_t> cubes_;
    std::vector<BitVec> cover_;
    std::vector<std::uint64_t> best_;
};

}  // namespace

HittingResult min_subcube_hitting(unsigned n, unsigned k, const Caps& caps) {
    if (k < 1 || k > n) throw InputError("min_subcube_hitting needs 1 <= k <= n");
    if (n > caps.hitting_length) throw ResourceError("hitting_length", caps.hitting_length, n);
    if (n > 6) throw ResourceError("hitting_length", 6, n);
    HittingSearch search(n, k);
    auto r = search.solve();
    std::sort(r.set.begin(), r.set.end());
    return r;
}

std::uint64_t max_solutions(unsigned n, unsigned k, const Caps& caps) {
    return (std::uint64_t{1} << n) - min_subcube_hitting(n, k, caps).min_size;
}

BanProblem problem_from_hitting_set(unsigned n, unsigned k, const std::vector<std::uint64_t>& hitting_set) {
    const BanShape shape{n, k, 2};
    std::unordered_set<std::uint64_t> B(hitting_set.begin(), hitting_set.end());
    auto oracle = [B, shape](std::span<const unsigned> S, std::uint64_t x) {
        BitVec out(shape.patterns());
        const std::vector<unsigned> s(S.begin(), S.end());
        for (std::uint64_t z = 0; z < shape.patterns(); ++z)
            if (B.count(encode(merge(shape, s, x, z), 2))) out.set(z);
        return out;
    };
    return BanProblem(RelaxedBanProblem(shape, std::move(oracle), "hitting_set"));
}

// -------------------------------------------------------------- generators

BanProblem parity_problem(unsigned n) {
    if (n < 1) throw InputError("parity_problem needs n >= 1");
    auto oracle = [](std::span<const unsigned>, std::uint64_t x) {
        BitVec out(2);
        out.set(std::popcount(x) % 2 == 0 ? 1 : 0);
        return out;
    };
    return BanProblem(RelaxedBanProblem(BanShape{n, 1, 2}, std::move(oracle), "parity"));
}

BanProblem from_vc(const SetSystem& F, unsigned m, const Caps& caps) {
    const unsigned n = static_cast<unsigned>(F.universe_size());
    if (m < 1 || m > n) throw InputError("from_vc needs 1 <= m <= universe size");
    const auto witness = vc_witness(F, caps);
    if (!F.empty() && witness.size() >= m) {
        std::string w;
        for (unsigned i = 0; i < m; ++i) w += (i ? "," : "") + std::to_string(witness[i]);
        throw InputError("from_vc: VC dimension " + std::to_string(witness.size()) + " >= m = " + std::to_string(m) +
                         "; shattered set {" + w + "}");
    }
    auto sets = std::make_shared<const std::vector<BitVec>>(F.sets());
    const BanShape shape{n, m, 2};
    auto oracle = [sets, shape](std::span<const unsigned> S, std::uint64_t) {
        BitVec out = BitVec::full(shape.patterns());
        for (const auto& A : *sets) {
            std::uint64_t z = 0;
            for (auto p : S) z = (z << 1) | (A.test(p) ? 1u : 0u);
            out.set(z, false);
        }
        return out;
    };
    return BanProblem(RelaxedBanProblem(shape, std::move(oracle), "from_vc"), caps);
}

BanProblem from_element_tree(const ElementTree& T, const SetSystem& F, unsigned m, const Caps& caps) {
    const unsigned s = T.arity_exponent();
    const unsigned n = static_cast<unsigned>(T.height());
    if (m < 1 || m > n) throw InputError("from_element_tree needs 1 <= m <= tree height");
    const RankValue rank = op_rank(F, s, caps);
    if (!(rank < RankValue::of(static_cast<int>(m))))
        throw InputError("from_element_tree: op_" + std::to_string(s) + " rank " + rank.to_string() +
                         " is not below m = " + std::to_string(m));
    for (std::size_t v = 0; v < T.node_count(); ++v)
        for (auto x : T.label(v))
            if (x >= F.universe_size()) throw InputError("element tree label outside the universe");
    const BanShape shape{n, m, 1u << s};
    auto tree = std::make_shared<const ElementTree>(T);
    auto sets = std::make_shared<const std::vector<BitVec>>(F.sets());
    auto oracle = [tree, sets, shape, s](std::span<const unsigned> S, std::uint64_t x) {
        const unsigned j = shape.j;
        const auto xd = decode(x, shape.n - shape.k, j);
        BitVec out = BitVec::full(shape.patterns());
        std::vector<unsigned> path;
        for (const auto& A : *sets) {
            path.clear();
            std::uint64_t z = 0;
            std::size_t si = 0, xi = 0;
            for (unsigned p = 0; p < shape.n; ++p) {
                unsigned digit;
                if (si < S.size() && S[si] == p) {
                    const auto& lab = tree->label(path);
                    digit = 0;
                    for (unsigned i = 0; i < s; ++i)
                        if (A.test(lab[i])) digit |= 1u << i;
                    z = z * j + digit;
                    ++si;
                } else {
                    digit = xd[xi++];
                }
                path.push_back(digit);
                if (si == S.size()) break;  // later levels cannot affect the pattern
            }
            out.set(z, false);
        }
        return out;
    };
    return BanProblem(RelaxedBanProblem(shape, std::move(oracle), "from_element_tree"), caps);
}

namespace {

std::uint64_t node_key(const std::string& eta) {
    std::uint64_t k = 1;
    for (char c : eta) k = (k << 1) | (c == '1' ? 1u : 0u);
    return k;
}

}  // namespace

BanProblem from_type_tree(const Graph& G, const TypeTree& TT, unsigned t, std::optional<unsigned> length,
                          const Caps& caps) {
    const std::size_t h = TT.height();
    if (t < 2) throw InputError("from_type_tree needs t >= 2");
    if (h < 2) throw InputError("from_type_tree needs a type tree of height >= 2");
    const unsigned L = length.value_or(static_cast<unsigned>(h - 1));
    if (L < t)
        throw InputError("from_type_tree: length " + std::to_string(L) + " is below the fold t = " + std::to_string(t));
    if (L > 62) throw InputError("from_type_tree: length above 62 is not supported");
    if (auto v = validate_type_tree(G, TT); !v.ok) throw InputError("from_type_tree: invalid type tree: " + v.message);

    auto nodes = std::make_shared<std::unordered_set<std::uint64_t>>();
    for (const auto& [eta, _] : TT.labels())
        if (eta.size() <= 62) nodes->insert(node_key(eta));
    const BanShape shape{L, t, 2};
    auto oracle = [nodes, shape](std::span<const unsigned> S, std::uint64_t x) {
        BitVec out(shape.patterns());
        const std::vector<unsigned> s(S.begin(), S.end());
        const unsigned cut = S.back() + 1;
        for (std::uint64_t z = 0; z < shape.patterns(); ++z) {
            const auto seq = merge(shape, s, x, z);
            std::uint64_t key = 1;
            for (unsigned p = 0; p < cut; ++p) key = (key << 1) | seq[p];
            if (!nodes->count(key)) out.set(z);
        }
        return out;
    };
    RelaxedBanProblem relaxed(shape, oracle, "from_type_tree");
    relaxed.materialize(caps);
    const auto& sub = relaxed.subsets();
    for (std::size_t i = 0; i < sub.size(); ++i)
        for (std::uint64_t x = 0; x < shape.contexts(); ++x) {
            if (!relaxed.bans_at(i, x).empty_set()) continue;
            // Every pattern survives: read off a full type tree of height t + 1.
            const auto& S = sub.positions(i);
            TypeTree full;
            for (unsigned len = 0; len <= t; ++len)
                for (std::uint64_t eta = 0; eta < (std::uint64_t{1} << len); ++eta) {
                    std::uint64_t z = eta << (t - len);
                    const auto seq = merge(shape, S, x, z);
                    const unsigned cut = len < t ? S[len] : S[t - 1] + 1;
                    std::string node, label;
                    for (unsigned p = 0; p < cut; ++p) node += static_cast<char>('0' + seq[p]);
                    for (unsigned b = 0; b < len; ++b) label += ((eta >> (len - 1 - b)) & 1u) ? '1' : '0';
                    full.insert(label, TT.at(node));
                }
            throw TreeRankExceeded("from_type_tree: empty ban set, so the tree rank exceeds t = " + std::to_string(t),
                                   std::move(full));
        }
    return BanProblem(std::move(relaxed), caps);
}

std::vector<LevelCountRow> check_level_counts(const Graph& G, const TypeTree& TT, unsigned t, const Caps& caps) {
    std::vector<LevelCountRow> rows;
    const std::size_t h = TT.height();
    for (std::size_t level = 0; level < h; ++level) {
        LevelCountRow row;
        row.level = level;
        row.nodes = TT.nodes_at_level(level);
        row.bound = binomial_prefix_sum(level, static_cast<long long>(t) - 1);
        row.pass = BigInt(row.nodes) <= row.bound;
        if (t >= 2 && level >= t && level <= caps.sequence_log2) {
            const auto f = from_type_tree(G, TT, t, static_cast<unsigned>(level), caps);
            const auto sol = solutions(f, caps);
            row.solver_solutions = sol.solutions.size();
            for (const auto& [eta, _] : TT.labels()) {
                if (eta.size() != level) continue;
                const auto code = sequence_from_string(eta, 2);
                if (!std::binary_search(sol.solutions.begin(), sol.solutions.end(), code)) row.pass = false;
            }
            if (BigInt(*row.solver_solutions) > row.bound) row.pass = false;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

BanProblem random_problem(BanShape shape, double density, std::uint64_t seed) {
    check_shape(shape);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<std::uint64_t> any(0, shape.patterns() - 1);
    std::vector<BitVec> entries;
    const std::uint64_t count = shape.subset_count() * shape.contexts();
    entries.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
        BitVec b(shape.patterns());
        for (std::uint64_t z = 0; z < shape.patterns(); ++z)
            if (coin(rng)) b.set(z);
        if (b.empty_set()) b.set(any(rng));
        entries.push_back(std::move(b));
    }
    return BanProblem(RelaxedBanProblem::from_entries(shape, std::move(entries), "random"));
}

BanProblem random_dense_problem(BanShape shape, std::uint64_t keep, std::uint64_t seed) {
    check_shape(shape);
    if (keep >= shape.patterns()) throw InputError("random_dense_problem: keep must be below j^k");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> perm(shape.patterns());
    std::vector<BitVec> entries;
    const std::uint64_t count = shape.subset_count() * shape.contexts();
    entries.reserve(count);
    for (std::uint64_t e = 0; e < count; ++e) {
        for (std::uint64_t z = 0; z < perm.size(); ++z) perm[z] = z;
        std::shuffle(perm.begin(), perm.end(), rng);
        BitVec b = BitVec::full(shape.patterns());
        for (std::uint64_t i = 0; i < keep; ++i) b.set(perm[i], false);
        entries.push_back(std::move(b));
    }
    return BanProblem(RelaxedBanProblem::from_entries(shape, std::move(entries), "random_dense"));
}

}  // namespace shatterlab
