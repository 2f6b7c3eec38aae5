#include "shatterlab/thicketvc.hpp"

#include "shatterlab/dims.hpp"
#include "shatterlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace shatterlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

// --------------------------------------------------------------- ProbSpace

ProbSpace::ProbSpace(std::vector<Rational> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InputError("probability space needs at least one point");
    Rational total = 0;
    BigInt D = 1;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] < 0) throw InputError("weight " + std::to_string(i) + " is negative");
        total += weights_[i];
        const BigInt q = boost::multiprecision::denominator(weights_[i]);
        D = D / boost::multiprecision::gcd(D, q) * q;
    }
    if (total != 1) throw InputError("weights sum to " + format_rational(total) + ", not 1");
    if (D > BigInt(std::numeric_limits<std::uint64_t>::max() >> 1))
        throw InputError("common denominator of the weights exceeds 2^63");
    denominator_ = static_cast<std::uint64_t>(D);
    std::uint64_t acc = 0;
    for (const auto& w : weights_) {
        acc += static_cast<std::uint64_t>(boost::multiprecision::numerator(w) * (D / boost::multiprecision::denominator(w)));
        cumulative_.push_back(acc);
    }
    const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % denominator_ + 1) % denominator_;
    accept_below_ = rem == 0 ? 0 : std::uint64_t{0} - rem;
}

ProbSpace ProbSpace::uniform(std::size_t N) {
    if (N == 0) throw InputError("probability space needs at least one point");
    return ProbSpace(std::vector<Rational>(N, Rational(1, static_cast<long long>(N))));
}

Rational ProbSpace::measure(const BitVec& S) const {
    if (S.size() != size())
        throw InputError("subset has length " + std::to_string(S.size()) + ", space has " + std::to_string(size()) +
                         " points");
    Rational m = 0;
    for (auto i : S.indices()) m += weights_[i];
    return m;
}

std::size_t ProbSpace::draw(std::uint64_t key) const {
    for (std::uint64_t i = 0;; ++i) {
        const std::uint64_t u = splitmix64(key + i);
        if (accept_below_ != 0 && u >= accept_below_) continue;
        const std::uint64_t r = u % denominator_;
        return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) -
                                        cumulative_.begin());
    }
}

// ---------------------------------------------------------------- TestTree

TestTree::TestTree(const ProbSpace& space, std::size_t height, std::uint64_t seed)
    : space_(&space), height_(height), seed_(seed) {
    if (height == 0) throw InputError("test tree height must be at least 1");
}

std::uint64_t TestTree::root_key(std::uint64_t seed) { return splitmix64(seed); }
std::uint64_t TestTree::child_key(std::uint64_t parent, bool bit) { return splitmix64(parent ^ (bit ? 3u : 2u)); }

std::size_t TestTree::label_at(std::uint64_t key) const {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const std::size_t x = space_->draw(key);
    cache_.emplace(key, x);
    return x;
}

std::size_t TestTree::label(const std::string& sigma) const {
    if (sigma.size() >= height_) throw InputError("node depth " + std::to_string(sigma.size()) + " >= height");
    std::uint64_t key = root_key(seed_);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] != '0' && sigma[i] != '1') throw InputError("node path must be binary");
        key = child_key(key, sigma[i] == '1');
    }
    return label_at(key);
}

std::string TestTree::characteristic_path(const BitVec& S) const {
    if (S.size() != space_->size()) throw InputError("subset length does not match the space");
    std::string path;
    path.reserve(height_);
    std::uint64_t key = root_key(seed_);
    for (std::size_t m = 0; m < height_; ++m) {
        const bool in = S.test(label_at(key));
        path += in ? '1' : '0';
        key = child_key(key, in);
    }
    return path;
}

std::size_t TestTree::path_ones(const BitVec& S) const {
    if (S.size() != space_->size()) throw InputError("subset length does not match the space");
    std::size_t ones = 0;
    std::uint64_t key = root_key(seed_);
    for (std::size_t m = 0; m < height_; ++m) {
        const bool in = S.test(space_->draw(key));
        ones += in;
        key = child_key(key, in);
    }
    return ones;
}

TestTree sample_test_tree(const ProbSpace& space, std::size_t n, std::uint64_t seed) { return TestTree(space, n, seed); }

std::string characteristic_path(const TestTree& tree, const BitVec& S) { return tree.characteristic_path(S); }

Rational test_estimate(const TestTree& tree, const BitVec& S) {
    const std::string path = tree.characteristic_path(S);
    return Rational(static_cast<long long>(std::count(path.begin(), path.end(), '1')),
                    static_cast<long long>(tree.height()));
}

namespace {

// Sum over label sequences of weight * (ones on the path), level by level.
Rational expectation_rec(const ProbSpace& space, const BitVec& S, std::size_t remaining, const Rational& weight,
                         std::size_t ones) {
    if (remaining == 0) return weight * static_cast<long long>(ones);
    Rational total = 0;
    for (std::size_t x = 0; x < space.size(); ++x) {
        if (space.weights()[x] == 0) continue;
        total += expectation_rec(space, S, remaining - 1, weight * space.weights()[x], ones + (S.test(x) ? 1 : 0));
    }
    return total;
}

}  // namespace

Rational exact_expectation(const ProbSpace& space, const BitVec& S, std::size_t n, const Caps& caps) {
    if (n == 0) throw InputError("height must be at least 1");
    if (S.size() != space.size()) throw InputError("subset length does not match the space");
    long double paths = std::pow(static_cast<long double>(space.size()), static_cast<long double>(n));
    if (paths > static_cast<long double>(caps.expectation_paths))
        throw ResourceError("expectation_paths", caps.expectation_paths,
                            paths > 1e18L ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(paths));
    return expectation_rec(space, S, n, Rational(1), 0) / static_cast<long long>(n);
}

Rational uniform_deviation(const TestTree& tree, const SetSystem& F, const ProbSpace& space) {
    if (F.universe_size() != space.size())
        throw InputError("set system universe " + std::to_string(F.universe_size()) + " does not match the " +
                         std::to_string(space.size()) + "-point space");
    Rational best = 0;
    const long long n = static_cast<long long>(tree.height());
    for (const auto& S : F.sets()) {
        const Rational d = boost::multiprecision::abs(Rational(static_cast<long long>(tree.path_ones(S)), n) -
                                                      space.measure(S));
        if (d > best) best = d;
    }
    return best;
}

// ------------------------------------------------------------- experiments

namespace {

template <class Trial>
std::vector<TrialRow> run_trials(const ExperimentConfig& cfg, Trial&& trial) {
    std::vector<TrialRow> rows(cfg.trials);
    unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, cfg.trials)));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            rows[i].trial = i;
            trial(derive_seed(cfg.seed, i), rows[i]);
        }
    };
    if (workers <= 1) {
        work(0, cfg.trials);
        return rows;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min(cfg.trials, w * chunk), e = std::min(cfg.trials, b + chunk);
        pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
    return rows;
}

void check_config(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw InputError("trials must be at least 1");
    if (cfg.n < 1) throw InputError("height n must be at least 1");
    if (cfg.epsilon <= 0) throw InputError("epsilon must be positive");
}

long double to_ld(const Rational& q) { return q.convert_to<long double>(); }

void finish(ExperimentReport& r, const ExperimentConfig& cfg, std::vector<TrialRow> rows) {
    r.n = cfg.n;
    r.epsilon = cfg.epsilon;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.exceedances = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const TrialRow& t) {
        return t.exceeded;
    }));
    r.empirical = Rational(static_cast<long long>(r.exceedances), static_cast<long long>(r.trials));
    const long double p = to_ld(r.empirical);
    r.slack = 3.0L * std::sqrt(p * (1.0L - p) / static_cast<long double>(r.trials));
    r.vacuous = r.raw_bound >= 1.0L;
    r.bound = std::min(1.0L, r.raw_bound);
    r.pass = p <= r.bound + r.slack + kBoundGuard;
    r.rows = std::move(rows);
}

}  // namespace

ExperimentReport run_weak_law(const ProbSpace& space, const BitVec& S, const ExperimentConfig& cfg, SampleMode mode) {
    check_config(cfg);
    const Rational mu = space.measure(S);
    const long long n = static_cast<long long>(cfg.n);
    auto trial = [&](std::uint64_t seed, TrialRow& row) {
        std::size_t ones = 0;
        if (mode == SampleMode::Tree) {
            ones = TestTree(space, cfg.n, seed).path_ones(S);
        } else {
            for (std::size_t i = 0; i < cfg.n; ++i) ones += S.test(space.draw(splitmix64(seed ^ (i * 0xD1B54A32D192ED03ull))));
        }
        row.deviation = boost::multiprecision::abs(Rational(static_cast<long long>(ones), n) - mu);
        row.exceeded = row.deviation >= cfg.epsilon;
    };
    ExperimentReport r;
    r.experiment = "weaklaw";
    r.mode = mode == SampleMode::Tree ? "tree" : "tuple";
    const long double eps = to_ld(cfg.epsilon);
    r.raw_bound = 1.0L / (4.0L * static_cast<long double>(cfg.n) * eps * eps);
    finish(r, cfg, run_trials(cfg, trial));
    return r;
}

ExperimentReport run_vc_theorem(const ProbSpace& space, const SetSystem& F, const ExperimentConfig& cfg) {
    check_config(cfg);
    if (F.universe_size() != space.size())
        throw InputError("set system universe " + std::to_string(F.universe_size()) + " does not match the " +
                         std::to_string(space.size()) + "-point space");
    ExperimentReport r;
    r.experiment = "vcthm";
    r.mode = "tree";
    if (F.universe_size() <= 12 && cfg.n <= 12) {
        r.rho = thicket_shatter(F, cfg.n);
        r.rho_source = "exact";
    } else {
        r.rho = sauer_shelah_sum(cfg.n, thicket_dimension(F));
        r.rho_source = "bounded";
    }
    const long double eps = to_ld(cfg.epsilon);
    if (r.rho == 0) {
        r.raw_bound = 0;
    } else {
        const long double log_rho = std::log(r.rho.convert_to<long double>());
        r.raw_bound = std::exp(std::log(8.0L) + log_rho - static_cast<long double>(cfg.n) * eps * eps / 32.0L);
    }
    auto trial = [&](std::uint64_t seed, TrialRow& row) {
        const TestTree tree(space, cfg.n, seed);
        row.deviation = uniform_deviation(tree, F, space);
        row.exceeded = row.deviation > cfg.epsilon;
    };
    finish(r, cfg, run_trials(cfg, trial));
    return r;
}

}  // namespace shatterlab
