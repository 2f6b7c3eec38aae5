#pragma once

#include "shatterlab/caps.hpp"
#include "shatterlab/rational.hpp"
#include "shatterlab/set_system.hpp"

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace shatterlab {

// A dimension or rank: a non-negative integer, or -inf for the empty family.
class RankValue {
public:
    constexpr RankValue() = default;
    static constexpr RankValue neg_inf() { return RankValue(); }
    static constexpr RankValue of(int v) { return RankValue(v); }

    constexpr bool is_neg_inf() const noexcept { return v_ == kNegInf; }
    // Precondition: !is_neg_inf().
    constexpr int value() const noexcept { return v_; }

    constexpr auto operator<=>(const RankValue&) const = default;

    // "-inf" or the decimal value.
    std::string to_string() const { return is_neg_inf() ? "-inf" : std::to_string(v_); }
    static RankValue parse(const std::string& s);

private:
    static constexpr int kNegInf = std::numeric_limits<int>::min();
    constexpr explicit RankValue(int v) : v_(v) {}
    int v_ = kNegInf;
};

// sum_{i=0}^{k} C(n, i), zero for k = -inf.
BigInt sauer_shelah_sum(std::uint64_t n, RankValue k);

// Labeled 2^s-ary tree of height n; node nu in (2^s)^{<n} carries an s-tuple.
// A branch digit sigma in [2^s] encodes membership of tuple entry i as bit i.
class ElementTree {
public:
    ElementTree(unsigned arity_exponent, std::size_t height, std::vector<std::vector<std::size_t>> labels);

    unsigned arity_exponent() const noexcept { return s_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t branching() const noexcept { return std::size_t{1} << s_; }
    std::size_t node_count() const noexcept { return labels_.size(); }

    // Index of the node reached by following `path` (|path| < height).
    std::size_t node_index(std::span<const unsigned> path) const;
    const std::vector<std::size_t>& label(std::size_t node) const { return labels_.at(node); }
    const std::vector<std::size_t>& label(std::span<const unsigned> path) const { return label(node_index(path)); }

    // The unique leaf that A properly labels.
    std::vector<unsigned> path_of(const BitVec& A) const;
    bool properly_labels(const BitVec& A, std::span<const unsigned> leaf) const;
    // Number of leaves properly labeled by some member of F.
    std::size_t properly_labeled_leaves(const SetSystem& F) const;

    static ElementTree random(unsigned arity_exponent, std::size_t height, std::size_t universe, std::uint64_t seed);

private:
    unsigned s_;
    std::size_t height_;
    std::vector<std::size_t> level_offset_;
    std::vector<std::vector<std::size_t>> labels_;
};

// Memoized rank and shatter recursions over subfamilies of one fixed family.
// Subfamilies are masks over F.sets(); every child of a subfamily is again a
// subfamily, so memo keys are shared across the whole recursion.
class RankEngine {
public:
    explicit RankEngine(const SetSystem& F);

    const SetSystem& family() const noexcept { return F_; }
    BitVec all() const { return BitVec::full(F_.size()); }

    // Members of `mask` whose membership pattern on xs is sigma (bit i <-> xs[i]).
    BitVec child_mask(const BitVec& mask, std::span<const std::size_t> xs, unsigned sigma) const;

    RankValue thicket_dimension(const BitVec& mask);
    std::uint64_t thicket_shatter(const BitVec& mask, std::size_t n);
    RankValue op_rank(const BitVec& mask, unsigned s);
    std::uint64_t op_shatter(const BitVec& mask, unsigned s, std::size_t n);

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<BitVec, std::size_t>& k) const noexcept {
            return k.first.hash() * 1000003u ^ k.second;
        }
    };

    RankValue op_rank_rec(const BitVec& mask, unsigned s, std::unordered_map<BitVec, RankValue, BitVecHash>& memo);

    const SetSystem& F_;
    std::vector<BitVec> cols_;
    std::unordered_map<BitVec, RankValue, BitVecHash> thicket_memo_;
    std::unordered_map<std::pair<BitVec, std::size_t>, std::uint64_t, KeyHash> rho_memo_;
    std::map<unsigned, std::unordered_map<BitVec, RankValue, BitVecHash>> op_memo_;
    std::map<unsigned, std::unordered_map<std::pair<BitVec, std::size_t>, std::uint64_t, KeyHash>> psi_memo_;
};

bool shatters(const SetSystem& F, std::span<const std::size_t> Y);
RankValue vc_dimension(const SetSystem& F, const Caps& caps = {});
// A shattered set of maximum size (empty when F is empty or VC = 0).
std::vector<std::size_t> vc_witness(const SetSystem& F, const Caps& caps = {});
// pi_F(n) = max |F_Y| over n-subsets Y; n <= universe.
std::uint64_t vc_shatter_function(const SetSystem& F, std::size_t n, const Caps& caps = {});

RankValue thicket_dimension(const SetSystem& F);
std::uint64_t thicket_shatter(const SetSystem& F, std::size_t n);
RankValue op_rank(const SetSystem& F, unsigned s, const Caps& caps = {});
std::uint64_t op_shatter(const SetSystem& F, unsigned s, std::size_t n, const Caps& caps = {});

// opR_r for r = 1..s.
std::vector<RankValue> rank_profile(const SetSystem& F, unsigned s, const Caps& caps = {});

// Number of sigma in 2^s with opR_r(F_sigma) <= opR_r(F) - l.
std::size_t count_children_dropping(const SetSystem& F, std::span<const std::size_t> xs, unsigned r, unsigned l,
                                    const Caps& caps = {});
// 2^s - sum_{i < l r} C(s, i), floored at zero.
BigInt children_dropping_lower_bound(unsigned s, unsigned r, unsigned l);

struct BoundRow {
    std::string bound;
    std::vector<std::pair<std::string, std::string>> params;
    std::string lhs;
    std::string rhs;
    std::string relation = "<=";
    bool pass = false;
};

struct BoundAuditReport {
    std::vector<BoundRow> rows;
    bool all_pass() const;
    std::vector<const BoundRow*> failures() const;
};

// Checks the Sauer-Shelah-type inequalities for every height m = 0..n:
//   sauer_shelah_vc            pi_F(m)   <= sum_{i<=d} C(m,i),             d = VC
//   thicket_sauer_shelah       rho_F(m)  <= sum_{i<=k} C(m,i),             k = thicket dim
//   op_shatter_rank            psi^s(m)  <= sum_{i<=k} (2^s-1)^{m-i} C(m,i), k = opR_s
//   op_shatter_rank_zero       psi^s(m)  <= (sum_{i<r} C(s,i))^m           when opR_r = 0
//   op_shatter_recurrence      psi^s(m)  <= sum_{i<=b} C(m,i) a0^{m-i} a1^i, b = opR_r
// and, height-free,
//   op_rank_ratio              floor(s2/s1) opR_{s2} <= opR_{s1}, s1 < s2 <= s
//   subfamily_monotone         max over leave-one-out subfamilies of opR_q <= opR_q(F), q <= s
BoundAuditReport audit_bounds(const SetSystem& F, unsigned s, unsigned r, std::size_t n, const Caps& caps = {});

}  // namespace shatterlab
