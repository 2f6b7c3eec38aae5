#include "shatterlab/set_system.hpp"

#include "shatterlab/errors.hpp"

#include <algorithm>

namespace shatterlab {

SetSystem::SetSystem(std::size_t universe_size, std::vector<BitVec> sets, std::string name)
    : universe_(universe_size), sets_(std::move(sets)), name_(std::move(name)) {
    for (std::size_t i = 0; i < sets_.size(); ++i)
        if (sets_[i].size() != universe_)
            throw InputError("set " + std::to_string(i) + " has length " + std::to_string(sets_[i].size()) +
                             ", universe is " + std::to_string(universe_));
    std::sort(sets_.begin(), sets_.end());
    sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
}

SetSystem SetSystem::from_strings(std::size_t universe_size, const std::vector<std::string>& sets,
                                  std::string name) {
    std::vector<BitVec> bv;
    bv.reserve(sets.size());
    for (const auto& s : sets) bv.push_back(BitVec::from_string(s));
    return SetSystem(universe_size, std::move(bv), std::move(name));
}

SetSystem SetSystem::from_index_lists(std::size_t universe_size,
                                      const std::vector<std::vector<std::size_t>>& sets, std::string name) {
    std::vector<BitVec> bv;
    bv.reserve(sets.size());
    for (const auto& s : sets) {
        BitVec b(universe_size);
        for (auto x : s) {
            if (x >= universe_size)
                throw InputError("element " + std::to_string(x) + " outside universe of size " +
                                 std::to_string(universe_size));
            b.set(x);
        }
        bv.push_back(std::move(b));
    }
    return SetSystem(universe_size, std::move(bv), std::move(name));
}

bool SetSystem::contains(const BitVec& s) const { return std::binary_search(sets_.begin(), sets_.end(), s); }

BitVec SetSystem::column(std::size_t x) const {
    BitVec c(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i)
        if (sets_[i].test(x)) c.set(i);
    return c;
}

SetSystem project(const SetSystem& F, std::span<const std::size_t> Y) {
    std::vector<std::size_t> ys(Y.begin(), Y.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (auto y : ys)
        if (y >= F.universe_size())
            throw InputError("projection index " + std::to_string(y) + " outside universe of size " +
                             std::to_string(F.universe_size()));
    std::vector<BitVec> traces;
    traces.reserve(F.size());
    for (const auto& s : F.sets()) {
        BitVec t(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i)
            if (s.test(ys[i])) t.set(i);
        traces.push_back(std::move(t));
    }
    return SetSystem(ys.size(), std::move(traces));
}

SetSystem project(const SetSystem& F, const BitVec& Y) {
    if (Y.size() != F.universe_size()) throw InputError("projection mask length differs from universe size");
    const auto idx = Y.indices();
    return project(F, std::span<const std::size_t>(idx));
}

SetSystem dual(const SetSystem& F) {
    std::vector<BitVec> cols;
    cols.reserve(F.universe_size());
    for (std::size_t x = 0; x < F.universe_size(); ++x) cols.push_back(F.column(x));
    return SetSystem(F.size(), std::move(cols));
}

SetSystem child(const SetSystem& F, std::span<const std::size_t> xs, const std::vector<bool>& sigma) {
    if (xs.size() != sigma.size())
        throw InputError("child: tuple has " + std::to_string(xs.size()) + " elements but pattern has " +
                         std::to_string(sigma.size()));
    for (auto x : xs)
        if (x >= F.universe_size())
            throw InputError("child: element " + std::to_string(x) + " outside universe");
    std::vector<BitVec> kept;
    for (const auto& s : F.sets()) {
        bool ok = true;
        for (std::size_t i = 0; i < xs.size() && ok; ++i) ok = s.test(xs[i]) == sigma[i];
        if (ok) kept.push_back(s);
    }
    return SetSystem(F.universe_size(), std::move(kept));
}

SetSystem subfamily(const SetSystem& F, const BitVec& mask) {
    std::vector<BitVec> kept;
    for (auto i : mask.indices()) kept.push_back(F.sets().at(i));
    return SetSystem(F.universe_size(), std::move(kept));
}

namespace gen {

SetSystem powerset(std::size_t n) {
    if (n > 24) throw InputError("powerset: universe " + std::to_string(n) + " too large");
    std::vector<BitVec> sets;
    sets.reserve(std::size_t{1} << n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        BitVec b(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((m >> i) & 1u) b.set(i);
        sets.push_back(std::move(b));
    }
    return SetSystem(n, std::move(sets), "powerset(" + std::to_string(n) + ")");
}

SetSystem singletons_with_empty(std::size_t n) {
    std::vector<BitVec> sets{BitVec(n)};
    for (std::size_t i = 0; i < n; ++i) {
        BitVec b(n);
        b.set(i);
        sets.push_back(std::move(b));
    }
    return SetSystem(n, std::move(sets), "singletons_with_empty(" + std::to_string(n) + ")");
}

SetSystem thresholds(std::size_t n) {
    std::vector<BitVec> sets;
    for (std::size_t t = 0; t <= n; ++t) {
        BitVec b(n);
        for (std::size_t i = 0; i < t; ++i) b.set(i);
        sets.push_back(std::move(b));
    }
    return SetSystem(n, std::move(sets), "thresholds(" + std::to_string(n) + ")");
}

SetSystem intervals(std::size_t n) {
    std::vector<BitVec> sets;
    for (std::size_t a = 0; a <= n; ++a)
        for (std::size_t b = a; b <= n; ++b) {
            BitVec s(n);
            for (std::size_t i = a; i < b; ++i) s.set(i);
            sets.push_back(std::move(s));
        }
    return SetSystem(n, std::move(sets), "intervals(" + std::to_string(n) + ")");
}

SetSystem all_subsets_of_size_at_most(std::size_t n, std::size_t d) {
    if (n > 24) throw InputError("all_subsets_of_size_at_most: universe " + std::to_string(n) + " too large");
    std::vector<BitVec> sets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) > d) continue;
        BitVec b(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((m >> i) & 1u) b.set(i);
        sets.push_back(std::move(b));
    }
    return SetSystem(n, std::move(sets),
                     "all_subsets_of_size_at_most(" + std::to_string(n) + "," + std::to_string(d) + ")");
}

}  // namespace gen

}  // namespace shatterlab
