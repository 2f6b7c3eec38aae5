#include "shatterlab/geometry.hpp"

#include "shatterlab/errors.hpp"

#include <random>
#include <set>
#include <utility>

namespace shatterlab {

namespace {

Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Calls fn(indices) for every m-subset of [n]; stops early when fn returns false.
template <class Fn>
bool for_each_subset(std::size_t n, std::size_t m, Fn&& fn) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    if (m > n) return true;
    while (true) {
        if (!fn(idx)) return false;
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Unique solution of the square system rows * p = rhs, or nullopt if singular.
std::optional<RationalVector> solve_square(std::vector<RationalVector> a, RationalVector b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    RationalVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace

bool Halfspace::contains(const RationalVector& p) const { return dot(normal, p) >= offset; }
bool Halfspace::on_boundary(const RationalVector& p) const { return dot(normal, p) == offset; }

std::size_t rational_rank(std::vector<RationalVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            const Rational f = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

PointArrangement::PointArrangement(std::size_t dimension, std::vector<RationalVector> points,
                                   std::vector<Halfspace> halfspaces)
    : r_(dimension), points_(std::move(points)), halfspaces_(std::move(halfspaces)) {
    if (r_ == 0) throw InputError("arrangement dimension must be positive");
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i].size() != r_)
            throw InputError("point " + std::to_string(i) + " has " + std::to_string(points_[i].size()) +
                             " coordinates, expected " + std::to_string(r_));
    for (std::size_t i = 0; i < halfspaces_.size(); ++i)
        if (halfspaces_[i].normal.size() != r_)
            throw InputError("halfspace " + std::to_string(i) + " normal has " +
                             std::to_string(halfspaces_[i].normal.size()) + " coordinates, expected " +
                             std::to_string(r_));

    general_position_ = true;
    for (std::size_t h = 0; h < halfspaces_.size() && general_position_; ++h) {
        for (std::size_t p = 0; p < points_.size(); ++p)
            if (halfspaces_[h].on_boundary(points_[p])) {
                general_position_ = false;
                degeneracy_ = "point " + std::to_string(p) + " lies on hyperplane " + std::to_string(h);
                break;
            }
    }
    for (std::size_t m = 1; m <= r_ && general_position_; ++m) {
        for_each_subset(halfspaces_.size(), m, [&](const std::vector<std::size_t>& idx) {
            std::vector<RationalVector> rows;
            for (auto i : idx) rows.push_back(halfspaces_[i].normal);
            if (rational_rank(rows) < m) {
                general_position_ = false;
                degeneracy_ = "hyperplanes {" + join(idx) + "} have dependent normals";
                return false;
            }
            return true;
        });
    }
    if (general_position_) {
        for_each_subset(halfspaces_.size(), r_ + 1, [&](const std::vector<std::size_t>& idx) {
            std::vector<RationalVector> rows;
            RationalVector rhs;
            for (std::size_t i = 0; i < r_; ++i) {
                rows.push_back(halfspaces_[idx[i]].normal);
                rhs.push_back(halfspaces_[idx[i]].offset);
            }
            auto x = solve_square(rows, rhs);
            if (x && halfspaces_[idx[r_]].on_boundary(*x)) {
                general_position_ = false;
                degeneracy_ = "hyperplanes {" + join(idx) + "} share a point";
                return false;
            }
            return true;
        });
    }
}

SetSystem halfspace_incidence(const PointArrangement& arr) {
    std::vector<BitVec> sets;
    for (const auto& h : arr.halfspaces()) {
        BitVec b(arr.points().size());
        for (std::size_t p = 0; p < arr.points().size(); ++p)
            if (h.contains(arr.points()[p])) b.set(p);
        sets.push_back(std::move(b));
    }
    return SetSystem(arr.points().size(), std::move(sets), "halfspace_incidence");
}

SetSystem halfspace_dual(const PointArrangement& arr) {
    std::vector<BitVec> sets;
    for (const auto& p : arr.points()) {
        BitVec b(arr.halfspaces().size());
        for (std::size_t h = 0; h < arr.halfspaces().size(); ++h)
            if (arr.halfspaces()[h].contains(p)) b.set(h);
        sets.push_back(std::move(b));
    }
    return SetSystem(arr.halfspaces().size(), std::move(sets), "halfspace_dual");
}

BigInt region_count_general_position(std::uint64_t r, std::uint64_t s) {
    return binomial_prefix_sum(s, static_cast<long long>(r));
}

BigInt line_arrangement_cells(const std::vector<Line>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].a == 0 && lines[i].b == 0)
            throw InputError("line " + std::to_string(i) + " has zero normal");
    using Point = std::pair<Rational, Rational>;
    std::set<Point> seen;
    std::vector<std::set<Point>> on_line(lines.size());

    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const Rational det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
            if (det == 0)
                throw InputError("lines " + std::to_string(i) + " and " + std::to_string(j) + " are parallel");
            const Point p{(lines[i].c * lines[j].b - lines[j].c * lines[i].b) / det,
                          (lines[i].a * lines[j].c - lines[j].a * lines[i].c) / det};
            for (std::size_t k = 0; k < lines.size(); ++k) {
                if (k == i || k == j) continue;
                if (lines[k].a * p.first + lines[k].b * p.second == lines[k].c) {
                    std::vector<std::size_t> t{i, j, k};
                    std::sort(t.begin(), t.end());
                    throw InputError("lines " + join(t) + " are concurrent");
                }
            }
            seen.insert(p);
            on_line[i].insert(p);
            on_line[j].insert(p);
        }

    if (lines.empty()) return 1;
    // Each line is cut by its d vertices into d + 1 edges.
    BigInt V = static_cast<std::uint64_t>(seen.size());
    BigInt E = 0;
    for (const auto& s : on_line) E += static_cast<std::uint64_t>(s.size() + 1);
    return E - V + 1;
}

namespace gen {

std::vector<Line> random_general_position_lines(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Line> lines;
        for (std::size_t i = 0; i < count; ++i) {
            Line l{coef(rng), coef(rng), coef(rng)};
            if (l.a == 0 && l.b == 0) l.a = 1;
            lines.push_back(l);
        }
        try {
            line_arrangement_cells(lines);
            return lines;
        } catch (const InputError&) {
        }
    }
    throw InputError("could not sample lines in general position");
}

}  // namespace gen

}  // namespace shatterlab
