#pragma once

#include "shatterlab/bitvec.hpp"
#include "shatterlab/caps.hpp"
#include "shatterlab/dims.hpp"
#include "shatterlab/rational.hpp"
#include "shatterlab/set_system.hpp"
#include "shatterlab/typetree.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shatterlab {

// Sequences over [j] are coded as integers with the lowest index as the most
// significant digit. A context X (on [n] \ S) and a pattern Z (on S) use the
// same convention over their own ascending index sets, so the code of Z
// extended by a last entry l is Z * j + l.
struct BanShape {
    unsigned n = 0;  // length
    unsigned k = 0;  // fold
    unsigned j = 2;  // alphabet size

    std::uint64_t patterns() const;  // j^k
    std::uint64_t contexts() const;  // j^{n-k}
    std::uint64_t sequences() const; // j^n
    std::uint64_t subset_count() const;

    friend bool operator==(const BanShape&, const BanShape&) = default;
};

// k-subsets of [n] in lexicographic order, addressable by bitmask.
class SubsetIndex {
public:
    SubsetIndex(unsigned n, unsigned k);
    std::size_t size() const noexcept { return masks_.size(); }
    std::uint64_t mask(std::size_t i) const { return masks_[i]; }
    const std::vector<unsigned>& positions(std::size_t i) const { return positions_[i]; }
    const std::vector<unsigned>& complement(std::size_t i) const { return complement_[i]; }
    std::size_t index_of(std::uint64_t mask) const;

private:
    std::vector<std::uint64_t> masks_;
    std::vector<std::vector<unsigned>> positions_, complement_;
    std::vector<std::pair<std::uint64_t, std::size_t>> lookup_;  // sorted by mask
};

// Ban table without the nonemptiness requirement. Ban sets come from an
// oracle evaluated on demand; counting operations work on a dense copy that
// is built once on first use.
class RelaxedBanProblem {
public:
    using Oracle = std::function<BitVec(std::span<const unsigned> S, std::uint64_t x)>;

    RelaxedBanProblem(BanShape shape, Oracle oracle, std::string origin = "oracle");
    // Entries ordered by (subset in lexicographic order, context code).
    static RelaxedBanProblem from_entries(BanShape shape, std::vector<BitVec> entries, std::string origin = "table");

    const BanShape& shape() const noexcept;
    unsigned n() const noexcept { return shape().n; }
    unsigned k() const noexcept { return shape().k; }
    unsigned j() const noexcept { return shape().j; }
    const std::string& origin() const noexcept;
    const SubsetIndex& subsets() const noexcept;

    // Ban set on S (ascending positions) given context code x; size j^k.
    BitVec bans(std::span<const unsigned> S, std::uint64_t x) const;
    BitVec bans_at(std::size_t subset_idx, std::uint64_t x) const;

    // Whether pattern z is banned; uses the dense table.
    bool banned(std::size_t subset_idx, std::uint64_t x, std::uint64_t z) const;
    // Dense table; throws ResourceError above the entry cap.
    void materialize(const Caps& caps = {}) const;
    bool has_empty_ban_set(const Caps& caps = {}) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    friend class BanProblem;
};

// A total ban table whose every ban set is nonempty.
class BanProblem {
public:
    // Throws InputError naming the first (S, X) with an empty ban set.
    explicit BanProblem(RelaxedBanProblem relaxed, const Caps& caps = {});

    const RelaxedBanProblem& relaxed() const noexcept { return relaxed_; }
    operator const RelaxedBanProblem&() const noexcept { return relaxed_; }
    const BanShape& shape() const noexcept { return relaxed_.shape(); }
    unsigned n() const noexcept { return relaxed_.n(); }
    unsigned k() const noexcept { return relaxed_.k(); }
    unsigned j() const noexcept { return relaxed_.j(); }
    BitVec bans(std::span<const unsigned> S, std::uint64_t x) const { return relaxed_.bans(S, x); }

private:
    RelaxedBanProblem relaxed_;
};

std::string sequence_to_string(std::uint64_t code, unsigned length, unsigned j);
std::uint64_t sequence_from_string(const std::string& s, unsigned j);

struct SolveResult {
    std::vector<std::uint64_t> solutions;  // ascending codes
    std::uint64_t banned = 0;              // B(f)
};

SolveResult solutions(const RelaxedBanProblem& f, const Caps& caps = {});
std::uint64_t banned_count(const RelaxedBanProblem& f, const Caps& caps = {});
bool is_solution(const RelaxedBanProblem& f, std::uint64_t sequence);

// (j^k - 1) j^{n-k}.
BigInt trivial_upper_bound(const BanShape& shape);
// sum_{i<k} (j-1)^{n-i} C(n, i).
BigInt main_theorem_bound(const BanShape& shape);

struct HereditaryWitness {
    std::vector<unsigned> S;
    // (Z, X_Z) for every Z in [j]^S, ordered by Z.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> assignments;
};

struct HereditaryResult {
    bool hereditary = true;
    std::optional<HereditaryWitness> witness;
};

// Searches each S for a witness of non-hereditariness as a game on the prefix
// tree of [j]^n: the witness chooses values at positions outside S and must
// cover every value at positions in S, leaving the pattern on S unbanned.
HereditaryResult is_hereditary(const RelaxedBanProblem& f, const Caps& caps = {});
// Checks a witness against the definition directly (pairwise first differences).
bool validate_witness(const RelaxedBanProblem& f, const HereditaryWitness& w);
bool is_independent(const RelaxedBanProblem& f, const Caps& caps = {});

// (k-1)-fold, length n-1: Z in hat(T, X) iff Z^l in f(T u {n-1}, X) for some l.
RelaxedBanProblem reduce_hat(const RelaxedBanProblem& f);
// k-fold, length n-1: Z in prime(S, X) iff Z in f(S, X^l) for every l.
RelaxedBanProblem reduce_prime(const RelaxedBanProblem& f);

struct CountingReport {
    std::uint64_t banned = 0, banned_hat = 0, banned_prime = 0;
    unsigned j = 2;
    bool prime_defined = true;  // false when k = n (no k-subsets of [n-1])
    bool holds = false;         // B(f) >= B(hat) + (j - 1) B(prime)
};
CountingReport check_counting_inequality(const RelaxedBanProblem& f, const Caps& caps = {});

struct MainTheoremReport {
    bool hereditary = true;
    std::optional<HereditaryWitness> witness;
    std::uint64_t solutions = 0;
    BigInt bound;
    bool within_bound = true;
    // Only a hereditary problem exceeding the bound is a failure.
    bool pass() const { return !hereditary || within_bound; }
};
MainTheoremReport verify_main_theorem(const RelaxedBanProblem& f, const Caps& caps = {});

struct HittingResult {
    std::size_t min_size = 0;
    std::vector<std::uint64_t> set;  // an optimal hitting set, as sequence codes
};
// Minimum set of binary sequences of length n meeting every k-dimensional subcube.
HittingResult min_subcube_hitting(unsigned n, unsigned k, const Caps& caps = {});
std::uint64_t max_solutions(unsigned n, unsigned k, const Caps& caps = {});
// The problem whose banned sequences are exactly `hitting_set`.
BanProblem problem_from_hitting_set(unsigned n, unsigned k, const std::vector<std::uint64_t>& hitting_set);

// Generators.
BanProblem parity_problem(unsigned n);
BanProblem from_vc(const SetSystem& F, unsigned m, const Caps& caps = {});
BanProblem from_element_tree(const ElementTree& T, const SetSystem& F, unsigned m, const Caps& caps = {});

// Thrown by from_type_tree when some ban set is empty; carries a full binary
// type tree of height t + 1, which shows the tree rank exceeds t.
class TreeRankExceeded : public std::runtime_error {
public:
    TreeRankExceeded(const std::string& what, TypeTree counterexample)
        : std::runtime_error(what), counterexample_(std::move(counterexample)) {}
    const TypeTree& counterexample() const noexcept { return counterexample_; }

private:
    TypeTree counterexample_;
};

// t-fold binary problem of the given length (default h - 1): Z is banned at
// (S, X) iff the prefix of X^Z of length s_{t-1} + 1 is not a node of the tree.
BanProblem from_type_tree(const Graph& G, const TypeTree& TT, unsigned t, std::optional<unsigned> length = {},
                          const Caps& caps = {});

struct LevelCountRow {
    std::size_t level = 0;
    std::size_t nodes = 0;
    BigInt bound;                                 // sum_{i<t} C(level, i)
    std::optional<std::uint64_t> solver_solutions; // when the level problem was solved
    bool pass = true;
};
// Nodes per level against sum_{i<t} C(level, i); levels whose problem fits the
// sequence cap are also solved and every node checked to be a solution.
std::vector<LevelCountRow> check_level_counts(const Graph& G, const TypeTree& TT, unsigned t, const Caps& caps = {});

// Each ban set drawn independently: each pattern banned with probability
// `density`, with one forced pattern if the draw came out empty.
BanProblem random_problem(BanShape shape, double density, std::uint64_t seed);
// Each ban set is all patterns but `keep` random ones (keep < j^k).
BanProblem random_dense_problem(BanShape shape, std::uint64_t keep, std::uint64_t seed);

}  // namespace shatterlab
