#pragma once

#include "shatterlab/geometry.hpp"
#include "shatterlab/set_system.hpp"

#include <random>
#include <string>
#include <vector>

namespace zoo {

using shatterlab::BitVec;
using shatterlab::SetSystem;

inline SetSystem random_family(std::size_t universe, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BitVec> sets;
    for (std::size_t i = 0; i < count; ++i) {
        BitVec b(universe);
        for (std::size_t x = 0; x < universe; ++x)
            if (rng() & 1u) b.set(x);
        sets.push_back(b);
    }
    return SetSystem(universe, std::move(sets), "random");
}

// Small points-and-halfspaces example in the plane.
inline SetSystem halfspace_example() {
    using shatterlab::Rational;
    std::vector<shatterlab::RationalVector> pts = {{Rational(0), Rational(0)}, {Rational(3), Rational(1)},
                                                   {Rational(1), Rational(3)}, {Rational(2), Rational(2)},
                                                   {Rational(-1), Rational(2)}};
    std::vector<shatterlab::Halfspace> hs = {{{Rational(1), Rational(0)}, Rational(1, 2)},
                                             {{Rational(0), Rational(1)}, Rational(3, 2)},
                                             {{Rational(1), Rational(1)}, Rational(7, 2)},
                                             {{Rational(1), Rational(-1)}, Rational(-1, 2)}};
    return shatterlab::halfspace_incidence(shatterlab::PointArrangement(2, pts, hs));
}

// Every named generator at small sizes, the two degenerate families, and a
// half-space incidence system.
inline std::vector<SetSystem> fixtures() {
    namespace gen = shatterlab::gen;
    std::vector<SetSystem> out;
    out.push_back(SetSystem(3, {}, "empty"));
    out.push_back(SetSystem(3, {BitVec(3)}, "only_empty_set"));
    for (std::size_t n = 0; n <= 4; ++n) out.push_back(gen::powerset(n));
    for (std::size_t n = 1; n <= 5; ++n) out.push_back(gen::singletons_with_empty(n));
    for (std::size_t n = 1; n <= 6; ++n) out.push_back(gen::thresholds(n));
    for (std::size_t n = 1; n <= 5; ++n) out.push_back(gen::intervals(n));
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t d = 0; d <= 2 && d <= n; ++d) out.push_back(gen::all_subsets_of_size_at_most(n, d));
    out.push_back(halfspace_example());
    out.push_back(shatterlab::dual(halfspace_example()));
    return out;
}

// Seeded random families: universe <= 8 and at most 64 sets.
inline std::vector<SetSystem> random_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SetSystem> out;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t universe = 1 + rng() % 8;
        const std::size_t sets = rng() % 65;
        out.push_back(random_family(universe, sets, rng()));
    }
    return out;
}

}  // namespace zoo
