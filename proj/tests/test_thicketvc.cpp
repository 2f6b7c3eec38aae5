#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shatterlab/errors.hpp"
#include "shatterlab/io.hpp"
#include "shatterlab/thicketvc.hpp"
#include "zoo.hpp"

#include <cmath>

using namespace shatterlab;

namespace {

BitVec subset(std::size_t N, std::vector<std::size_t> members) {
    BitVec b(N);
    for (auto i : members) b.set(i);
    return b;
}

ExperimentConfig config(std::size_t n, Rational eps, std::size_t trials, std::uint64_t seed, unsigned threads = 1) {
    ExperimentConfig c;
    c.n = n;
    c.epsilon = eps;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

TEST_CASE("seed derivation") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(TestTree::child_key(5, false) != TestTree::child_key(5, true));
}

TEST_CASE("probability spaces") {
    CHECK_THROWS_AS(ProbSpace({Rational(1, 2), Rational(1, 3)}), InputError);
    CHECK_THROWS_AS(ProbSpace({Rational(3, 2), Rational(-1, 2)}), InputError);
    CHECK_THROWS_AS(ProbSpace({}), InputError);
    ProbSpace sp({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(sp.measure(subset(3, {1, 2})) == Rational(1, 2));
    CHECK_THROWS_AS(sp.measure(BitVec(2)), InputError);

    std::vector<std::size_t> counts(3, 0);
    const std::size_t N = 40000;
    for (std::uint64_t k = 0; k < N; ++k) counts[sp.draw(splitmix64(k * 7919))]++;
    const double expect[3] = {0.5, 0.25, 0.25};
    for (std::size_t i = 0; i < 3; ++i) {
        const double sd = std::sqrt(expect[i] * (1 - expect[i]) / N);
        CHECK(std::abs(static_cast<double>(counts[i]) / N - expect[i]) < 5 * sd);
    }
    ProbSpace zero_weight({Rational(0), Rational(1)});
    for (std::uint64_t k = 0; k < 1000; ++k) CHECK(zero_weight.draw(k) == 1);
}

TEST_CASE("test trees") {
    auto one = ProbSpace::uniform(1);
    TestTree t1(one, 6, 3);
    CHECK(t1.label("") == 0);
    CHECK(t1.label("01011") == 0);

    auto two = ProbSpace::uniform(2);
    TestTree t(two, 20, 77);
    CHECK(t.label("0110") == t.label("0110"));
    TestTree again(two, 20, 77);
    CHECK(again.label("0110") == t.label("0110"));
    CHECK_THROWS_AS(t.label(std::string(20, '0')), InputError);

    CHECK(t.characteristic_path(BitVec::full(2)) == std::string(20, '1'));
    CHECK(t.characteristic_path(BitVec(2)) == std::string(20, '0'));
    CHECK(test_estimate(t, BitVec::full(2)) == 1);
    CHECK(test_estimate(t, BitVec(2)) == 0);

    TestTree lazy(two, 30, 5);
    (void)lazy.characteristic_path(subset(2, {0}));
    CHECK(lazy.populated() == 30);
}

TEST_CASE("two-point example path") {
    // Find a seed whose root is labeled a (= 0) and whose node "1" is labeled b (= 1).
    auto two = ProbSpace::uniform(2);
    std::uint64_t seed = 0;
    while (true) {
        TestTree t(two, 2, seed);
        if (t.label("") == 0 && t.label("1") == 1) break;
        ++seed;
    }
    TestTree t(two, 2, seed);
    CHECK(t.characteristic_path(subset(2, {0})) == "10");
    CHECK(test_estimate(t, subset(2, {0})) == Rational(1, 2));
}

TEST_CASE("label frequencies") {
    auto two = ProbSpace::uniform(2);
    std::size_t zeros = 0, total = 0;
    for (std::uint64_t s = 0; s < 500; ++s) {
        TestTree t(two, 20, s);
        std::string sigma;
        for (std::size_t d = 0; d < 20; ++d) {
            zeros += t.label(sigma) == 0;
            ++total;
            sigma += (splitmix64(s * 31 + d) & 1u) ? '1' : '0';
        }
    }
    const double sd = std::sqrt(0.25 / static_cast<double>(total));
    CHECK(std::abs(static_cast<double>(zeros) / static_cast<double>(total) - 0.5) < 5 * sd);
}

TEST_CASE("exact expectation") {
    auto two = ProbSpace::uniform(2);
    CHECK(exact_expectation(two, BitVec(2), 3) == 0);
    CHECK(exact_expectation(two, subset(2, {1}), 3) == Rational(1, 2));
    ProbSpace sp({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(exact_expectation(sp, subset(3, {2}), 2) == Rational(1, 4));
    for (const auto& F : zoo::fixtures()) {
        if (F.universe_size() == 0 || F.universe_size() > 5) continue;
        auto u = ProbSpace::uniform(F.universe_size());
        for (const auto& S : F.sets())
            for (std::size_t n = 1; n <= 3; ++n) CHECK(exact_expectation(u, S, n) == u.measure(S));
    }
    Caps tight;
    tight.expectation_paths = 10;
    CHECK_THROWS_AS(exact_expectation(ProbSpace::uniform(4), subset(4, {0}), 3, tight), ResourceError);
}

TEST_CASE("estimates and deviations") {
    auto sp = ProbSpace::uniform(6);
    for (std::uint64_t s = 0; s < 50; ++s) {
        TestTree t(sp, 12, s);
        auto S = subset(6, {1, 4});
        const auto path = t.characteristic_path(S);
        CHECK(test_estimate(t, S) == Rational(static_cast<long long>(std::count(path.begin(), path.end(), '1')), 12));
        CHECK(t.path_ones(S) == static_cast<std::size_t>(std::count(path.begin(), path.end(), '1')));
    }
    SetSystem trivial(6, {BitVec(6), BitVec::full(6)});
    CHECK(uniform_deviation(TestTree(sp, 9, 1), trivial, sp) == 0);
    CHECK(uniform_deviation(TestTree(sp, 9, 1), SetSystem(6, {}), sp) == 0);

    auto two = ProbSpace::uniform(2);
    SetSystem point(2, {subset(2, {0})});
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(uniform_deviation(TestTree(two, 1, s), point, two) == Rational(1, 2));

    for (const auto& F : zoo::random_corpus(20, 61)) {
        auto u = ProbSpace::uniform(F.universe_size());
        auto d = uniform_deviation(TestTree(u, 7, 3), F, u);
        CHECK(d >= 0);
        CHECK(d <= 1);
    }
}

TEST_CASE("independence of levels along the path") {
    auto two = ProbSpace::uniform(2);
    const auto S = subset(2, {0});
    const std::size_t trees = 10000, n = 4;
    std::vector<std::vector<int>> Y(n, std::vector<int>(trees));
    for (std::size_t s = 0; s < trees; ++s) {
        const auto path = TestTree(two, n, derive_seed(9, s)).characteristic_path(S);
        for (std::size_t i = 0; i < n; ++i) Y[i][s] = path[i] == '1';
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            double ma = 0, mb = 0, mab = 0;
            for (std::size_t s = 0; s < trees; ++s) {
                ma += Y[a][s];
                mb += Y[b][s];
                mab += Y[a][s] * Y[b][s];
            }
            ma /= trees;
            mb /= trees;
            mab /= trees;
            const double cov = mab - ma * mb;
            const double sd = std::sqrt(ma * (1 - ma) * mb * (1 - mb) / trees);
            CHECK(std::abs(cov) < 5 * sd);
        }
}

TEST_CASE("weak law experiment") {
    auto sp = ProbSpace::uniform(64);
    BitVec half(64);
    for (std::size_t i = 0; i < 32; ++i) half.set(i);

    auto rep = run_weak_law(sp, half, config(100, Rational(1, 5), 200, 1));
    CHECK(std::abs(static_cast<double>(rep.raw_bound) - 0.0625) < 1e-15);
    CHECK(rep.pass);

    auto none = run_weak_law(sp, BitVec(64), config(30, Rational(1, 10), 300, 2));
    CHECK(none.exceedances == 0);
    CHECK(none.pass);

    auto big = run_weak_law(sp, half, config(200, Rational(1, 10), 2000, 3));
    CHECK(std::abs(static_cast<double>(big.bound) - 0.125) < 1e-15);
    CHECK(big.empirical < Rational(1, 8));
    CHECK(big.pass);

    auto tuple = run_weak_law(sp, half, config(200, Rational(1, 10), 2000, 3), SampleMode::Tuple);
    CHECK(tuple.mode == "tuple");
    CHECK(tuple.pass);

    auto vac = run_weak_law(sp, half, config(2, Rational(1, 10), 50, 4));
    CHECK(vac.vacuous);
    CHECK(vac.bound == 1);
    CHECK(vac.pass);
}

TEST_CASE("vc theorem experiment") {
    auto sp = ProbSpace::uniform(5);
    SetSystem trivial(5, {BitVec(5), BitVec::full(5)});
    auto rep = run_vc_theorem(sp, trivial, config(10, Rational(1, 10), 200, 5));
    CHECK(rep.rho == 2);
    CHECK(rep.exceedances == 0);
    CHECK(rep.vacuous);
    CHECK(rep.rho_source == "exact");
    CHECK(rep.pass);

    auto big = run_vc_theorem(ProbSpace::uniform(3), gen::thresholds(3), config(5000, Rational(1, 2), 200, 6));
    CHECK(big.rho_source == "bounded");
    CHECK(big.rho == BigInt(1 + 5000 + 5000 * 4999 / 2));
    CHECK(big.bound < 1e-8L);
    CHECK(big.exceedances == 0);
}

TEST_CASE("determinism across thread counts") {
    auto sp = ProbSpace::uniform(64);
    BitVec half(64);
    for (std::size_t i = 0; i < 32; ++i) half.set(i);
    auto a = run_weak_law(sp, half, config(50, Rational(1, 10), 400, 11, 1));
    auto b = run_weak_law(sp, half, config(50, Rational(1, 10), 400, 11, 4));
    CHECK(io::to_json(a).dump() == io::to_json(b).dump());
    CHECK(io::trials_csv(a) == io::trials_csv(b));

    auto F = zoo::random_family(8, 10, 4);
    auto u = ProbSpace::uniform(8);
    auto c = run_vc_theorem(u, F, config(20, Rational(1, 4), 300, 12, 1));
    auto d = run_vc_theorem(u, F, config(20, Rational(1, 4), 300, 12, 3));
    CHECK(io::to_json(c).dump() == io::to_json(d).dump());
}
