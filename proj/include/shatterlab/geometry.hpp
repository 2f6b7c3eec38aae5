#pragma once

#include "shatterlab/rational.hpp"
#include "shatterlab/set_system.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shatterlab {

using RationalVector = std::vector<Rational>;

// Closed half-space {p : <normal, p> >= offset}; its boundary is the hyperplane.
struct Halfspace {
    RationalVector normal;
    Rational offset;

    bool contains(const RationalVector& p) const;
    bool on_boundary(const RationalVector& p) const;
};

class PointArrangement {
public:
    PointArrangement(std::size_t dimension, std::vector<RationalVector> points, std::vector<Halfspace> halfspaces);

    std::size_t dimension() const noexcept { return r_; }
    const std::vector<RationalVector>& points() const noexcept { return points_; }
    const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }

    // Every m <= r boundary hyperplanes have independent normals, no r + 1
    // share a point, and no point lies on a boundary.
    bool general_position() const noexcept { return general_position_; }
    // Human-readable reason when general_position() is false.
    const std::string& degeneracy() const noexcept { return degeneracy_; }

private:
    std::size_t r_;
    std::vector<RationalVector> points_;
    std::vector<Halfspace> halfspaces_;
    bool general_position_ = false;
    std::string degeneracy_;
};

// Rank of a rational matrix given as rows.
std::size_t rational_rank(std::vector<RationalVector> rows);

// Base = points, one set per half-space (the points it contains).
SetSystem halfspace_incidence(const PointArrangement& arr);
// Base = half-spaces, one set per point.
SetSystem halfspace_dual(const PointArrangement& arr);

// sum_{i <= r} C(s, i): cells cut out of R^r by s hyperplanes in general position.
BigInt region_count_general_position(std::uint64_t r, std::uint64_t s);

// A line {p in Q^2 : a * p.x + b * p.y = c}.
struct Line {
    Rational a, b, c;
};

// Cell count of a planar line arrangement via V - E + F = 1. Throws InputError
// naming the offending pair (parallel) or triple (concurrent).
BigInt line_arrangement_cells(const std::vector<Line>& lines);

namespace gen {

// Seeded lines with small integer coefficients, resampled until no two are
// parallel and no three concurrent.
std::vector<Line> random_general_position_lines(std::size_t count, std::uint64_t seed);

}  // namespace gen

}  // namespace shatterlab
