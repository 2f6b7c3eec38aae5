#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shatterlab/combinatorics.hpp"
#include "shatterlab/errors.hpp"
#include "shatterlab/geometry.hpp"
#include "shatterlab/set_system.hpp"
#include "zoo.hpp"

#include <random>

using namespace shatterlab;

namespace {

SetSystem sys(std::size_t u, std::vector<std::vector<std::size_t>> sets) {
    return SetSystem::from_index_lists(u, sets);
}

std::vector<std::size_t> random_subset(std::size_t u, std::mt19937_64& rng) {
    std::vector<std::size_t> Y;
    for (std::size_t x = 0; x < u; ++x)
        if (rng() & 1u) Y.push_back(x);
    return Y;
}

}  // namespace

TEST_CASE("construction deduplicates and sorts") {
    auto F = sys(3, {{1}, {0, 2}, {1}, {}});
    CHECK(F.size() == 3);
    CHECK(F == sys(3, {{}, {0, 2}, {1}}));
    CHECK(F.contains(BitVec::from_string("010")));
    CHECK_FALSE(F.contains(BitVec::from_string("110")));
    CHECK_THROWS_AS(sys(2, {{2}}), InputError);
    CHECK_THROWS_AS(SetSystem(2, {BitVec(3)}), InputError);
}

TEST_CASE("project") {
    auto F = sys(2, {{0, 1}, {1}});
    std::vector<std::size_t> Y{1};
    CHECK(project(F, Y) == sys(1, {{0}}));

    std::vector<std::size_t> none;
    CHECK(project(F, none) == SetSystem(0, {BitVec(0)}));
    CHECK(project(SetSystem(2, {}), none).empty());

    std::vector<std::size_t> Y02{0, 2};
    auto P = project(gen::powerset(3), Y02);
    CHECK(P.universe_size() == 2);
    CHECK(P == gen::powerset(2));

    CHECK(project(F, BitVec::from_string("01")) == project(F, Y));
    std::vector<std::size_t> bad{5};
    CHECK_THROWS_AS(project(F, bad), InputError);
}

TEST_CASE("dual") {
    auto D = dual(SetSystem(2, {BitVec(2)}));
    CHECK(D.universe_size() == 1);
    CHECK(D == SetSystem(1, {BitVec(1)}));

    CHECK(dual(sys(2, {{0}, {1}})) == sys(2, {{0}, {1}}));

    auto P = gen::powerset(2);
    auto PD = dual(P);
    CHECK(PD.universe_size() == 4);
    CHECK(PD.size() == 2);
    for (const auto& s : PD.sets()) CHECK(s.count() == 2);
}

TEST_CASE("child") {
    std::vector<std::size_t> x0{0};
    CHECK(child(gen::powerset(2), x0, {true}) == sys(2, {{0}, {0, 1}}));

    std::vector<std::size_t> x00{0, 0};
    for (const auto& F : zoo::fixtures())
        if (F.universe_size() > 0) CHECK(child(F, x00, {false, true}).empty());

    std::vector<std::size_t> x01{0, 1};
    CHECK(child(sys(2, {{}, {0}, {0, 1}}), x01, {true, false}) == sys(2, {{0}}));
    CHECK_THROWS_AS(child(gen::powerset(2), x01, {true}), InputError);
}

TEST_CASE("generators") {
    CHECK(gen::thresholds(3) == sys(3, {{}, {0}, {0, 1}, {0, 1, 2}}));
    CHECK(gen::all_subsets_of_size_at_most(4, 1).size() == 5);
    CHECK(gen::powerset(4).size() == 16);
    CHECK(gen::singletons_with_empty(4).size() == 5);
    CHECK(gen::intervals(4).size() == 11);  // empty plus C(5,2) nonempty intervals
    for (std::size_t n = 0; n <= 6; ++n)
        for (std::size_t d = 0; d <= n; ++d)
            CHECK(BigInt(gen::all_subsets_of_size_at_most(n, d).size()) ==
                  binomial_prefix_sum(n, static_cast<long long>(d)));
}

TEST_CASE("halfspace incidence in one dimension") {
    PointArrangement arr(1, {{Rational(-1)}, {Rational(1)}}, {{{Rational(1)}, Rational(0)}});
    CHECK(arr.general_position());
    CHECK(halfspace_incidence(arr) == sys(2, {{1}}));
    auto D = halfspace_dual(arr);
    CHECK(D == sys(1, {{}, {0}}));
    CHECK(D.sets()[0] == ~D.sets()[1]);
    CHECK(D == dual(halfspace_incidence(arr)));
}

TEST_CASE("general position detection") {
    PointArrangement on(1, {{Rational(0)}}, {{{Rational(1)}, Rational(0)}});
    CHECK_FALSE(on.general_position());
    CHECK(on.degeneracy().find("lies on") != std::string::npos);

    // Three lines through the origin.
    PointArrangement conc(2, {{Rational(5), Rational(7)}},
                          {{{Rational(1), Rational(0)}, Rational(0)},
                           {{Rational(0), Rational(1)}, Rational(0)},
                           {{Rational(1), Rational(1)}, Rational(0)}});
    CHECK_FALSE(conc.general_position());

    PointArrangement par(2, {{Rational(5), Rational(7)}},
                         {{{Rational(1), Rational(0)}, Rational(0)}, {{Rational(2), Rational(0)}, Rational(1)}});
    CHECK_FALSE(par.general_position());

    CHECK_THROWS_AS(PointArrangement(2, {{Rational(1)}}, {}), InputError);
}

TEST_CASE("rational rank") {
    CHECK(rational_rank({}) == 0);
    CHECK(rational_rank({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 1);
    CHECK(rational_rank({{Rational(1, 3), Rational(2)}, {Rational(2), Rational(1, 7)}}) == 2);
}

TEST_CASE("region counts") {
    CHECK(region_count_general_position(2, 2) == 4);
    CHECK(region_count_general_position(2, 3) == 7);
    CHECK(region_count_general_position(3, 3) == 8);
    CHECK(region_count_general_position(1, 0) == 1);
    CHECK(region_count_general_position(5, 3) == 8);
}

TEST_CASE("line arrangement cells") {
    Line x{Rational(1), Rational(0), Rational(0)};
    Line y{Rational(0), Rational(1), Rational(0)};
    Line d{Rational(1), Rational(1), Rational(1)};
    Line e{Rational(1), Rational(-2), Rational(3)};
    CHECK(line_arrangement_cells({}) == 1);
    CHECK(line_arrangement_cells({x}) == 2);
    CHECK(line_arrangement_cells({x, y}) == 4);
    CHECK(line_arrangement_cells({x, y, d}) == 7);
    CHECK(line_arrangement_cells({x, y, d, e}) == 11);

    Line x2{Rational(2), Rational(0), Rational(5)};
    CHECK_THROWS_WITH_AS(line_arrangement_cells({x, y, x2}), doctest::Contains("parallel"), InputError);
    Line through{Rational(1), Rational(1), Rational(0)};
    CHECK_THROWS_WITH_AS(line_arrangement_cells({x, y, through}), doctest::Contains("concurrent"), InputError);
}

TEST_CASE("property: random general position lines agree with the region formula") {
    for (std::size_t s = 0; s <= 8; ++s)
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto lines = gen::random_general_position_lines(s, seed * 31 + s);
            REQUIRE(lines.size() == s);
            CHECK(line_arrangement_cells(lines) == region_count_general_position(2, s));
        }
}

TEST_CASE("property: projection composes") {
    std::mt19937_64 rng(7);
    for (const auto& F : zoo::random_corpus(150, 11)) {
        auto Y = random_subset(F.universe_size(), rng);
        // Y' as positions inside Y, and as original elements.
        std::vector<std::size_t> inner, outer;
        for (std::size_t i = 0; i < Y.size(); ++i)
            if (rng() & 1u) {
                inner.push_back(i);
                outer.push_back(Y[i]);
            }
        CHECK(project(project(F, Y), inner) == project(F, outer));
    }
}

TEST_CASE("property: dual size and double dual") {
    for (const auto& F : zoo::random_corpus(150, 12)) {
        auto D = dual(F);
        CHECK(D.size() <= F.universe_size());
        CHECK(D.universe_size() == F.size());
    }
    for (const auto& F : zoo::fixtures()) CHECK(dual(F).size() <= F.universe_size());
}

TEST_CASE("property: children partition the family") {
    std::mt19937_64 rng(3);
    for (const auto& F : zoo::random_corpus(150, 13)) {
        const std::size_t u = F.universe_size();
        const std::size_t s = 1 + rng() % std::min<std::size_t>(u, 3);
        std::vector<std::size_t> perm(u);
        for (std::size_t i = 0; i < u; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::size_t> xs(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s));
        std::size_t total = 0;
        for (unsigned sigma = 0; sigma < (1u << s); ++sigma) {
            std::vector<bool> bits(s);
            for (std::size_t i = 0; i < s; ++i) bits[i] = (sigma >> i) & 1u;
            total += child(F, xs, bits).size();
        }
        CHECK(total == F.size());
    }
}

TEST_CASE("combinations in lexicographic order") {
    auto masks = combinations_as_masks(4, 2);
    CHECK(masks == std::vector<std::uint64_t>{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100});
    std::size_t visits = 0;
    CHECK(for_each_combination(5, 0, [&](std::span<const std::size_t>) { return ++visits, true; }));
    CHECK(visits == 1);
    CHECK(for_each_combination(2, 3, [&](std::span<const std::size_t>) { return false; }));
}
