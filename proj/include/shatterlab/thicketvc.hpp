#pragma once

#include "shatterlab/bitvec.hpp"
#include "shatterlab/caps.hpp"
#include "shatterlab/rational.hpp"
#include "shatterlab/set_system.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace shatterlab {

std::uint64_t splitmix64(std::uint64_t x);
// Seed of trial `index` under master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Finite probability space on [N] with exact rational weights.
class ProbSpace {
public:
    explicit ProbSpace(std::vector<Rational> weights);
    static ProbSpace uniform(std::size_t N);

    std::size_t size() const noexcept { return weights_.size(); }
    const std::vector<Rational>& weights() const noexcept { return weights_; }
    Rational measure(const BitVec& S) const;

    // Exact draw from mu driven by a 64-bit counter stream starting at `key`:
    // u_i = splitmix64(key + i), rejected while u_i falls in the biased tail
    // of [0, 2^64) modulo the common denominator D.
    std::size_t draw(std::uint64_t key) const;

private:
    std::vector<Rational> weights_;
    std::uint64_t denominator_ = 1;
    std::vector<std::uint64_t> cumulative_;  // in units of 1/D
    std::uint64_t accept_below_ = 0;         // 0 means every u is accepted
};

// Lazily labeled binary tree of height n. Node keys follow the path:
// key("") = splitmix64(seed), key(sigma b) = splitmix64(key(sigma) ^ (2 + b)),
// and the label of sigma is space.draw(key(sigma)).
class TestTree {
public:
    TestTree(const ProbSpace& space, std::size_t height, std::uint64_t seed);

    std::size_t height() const noexcept { return height_; }
    std::uint64_t seed() const noexcept { return seed_; }

    static std::uint64_t root_key(std::uint64_t seed);
    static std::uint64_t child_key(std::uint64_t parent, bool bit);

    // Label of the node with the given '0'/'1' path (|sigma| < height).
    std::size_t label(const std::string& sigma) const;
    // Populates exactly the nodes along the path.
    std::string characteristic_path(const BitVec& S) const;
    // Number of ones on the characteristic path, without caching labels.
    std::size_t path_ones(const BitVec& S) const;

    std::size_t populated() const noexcept { return cache_.size(); }

private:
    std::size_t label_at(std::uint64_t key) const;

    const ProbSpace* space_;
    std::size_t height_;
    std::uint64_t seed_;
    mutable std::unordered_map<std::uint64_t, std::size_t> cache_;
};

TestTree sample_test_tree(const ProbSpace& space, std::size_t n, std::uint64_t seed);
std::string characteristic_path(const TestTree& tree, const BitVec& S);
// (ones on the characteristic path) / n.
Rational test_estimate(const TestTree& tree, const BitVec& S);
// Expectation of test_estimate by enumerating every label sequence along the
// path (N^n terms; capped by caps.expectation_paths).
Rational exact_expectation(const ProbSpace& space, const BitVec& S, std::size_t n, const Caps& caps = {});
// max over S in F of |test(tree, S) - mu(S)|; zero for the empty family.
Rational uniform_deviation(const TestTree& tree, const SetSystem& F, const ProbSpace& space);

enum class SampleMode { Tree, Tuple };

struct TrialRow {
    std::size_t trial = 0;
    Rational deviation;
    bool exceeded = false;
};

struct ExperimentReport {
    std::string experiment;  // "weaklaw" or "vcthm"
    std::string mode;        // "tree" or "tuple"
    std::size_t n = 0;
    Rational epsilon;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t exceedances = 0;
    Rational empirical;      // exceedances / trials
    long double raw_bound = 0;
    long double bound = 0;   // min(1, raw_bound)
    long double slack = 0;   // 3 binomial standard errors
    bool vacuous = false;    // raw_bound >= 1
    std::string rho_source;  // vcthm: "exact" or "bounded"
    BigInt rho;
    bool pass = false;
    std::vector<TrialRow> rows;
};

struct ExperimentConfig {
    std::size_t n = 1;
    Rational epsilon;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

inline constexpr long double kBoundGuard = 1e-12L;

// Weak law: counts trials with |estimate - mu(S)| >= epsilon against
// 1 / (4 n epsilon^2). Tree mode uses test trees, tuple mode n i.i.d. draws.
ExperimentReport run_weak_law(const ProbSpace& space, const BitVec& S, const ExperimentConfig& cfg,
                              SampleMode mode = SampleMode::Tree);
// Counts trials with uniform deviation > epsilon against 8 rho(n) exp(-n eps^2 / 32).
ExperimentReport run_vc_theorem(const ProbSpace& space, const SetSystem& F, const ExperimentConfig& cfg);

}  // namespace shatterlab
