#pragma once

#include "shatterlab/bitvec.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace shatterlab {

// A finite universe [n] with a deduplicated family of subsets, kept sorted by
// numeric value so that equal families compare equal.
class SetSystem {
public:
    SetSystem() = default;
    SetSystem(std::size_t universe_size, std::vector<BitVec> sets, std::string name = {});

    static SetSystem from_strings(std::size_t universe_size, const std::vector<std::string>& sets,
                                  std::string name = {});
    static SetSystem from_index_lists(std::size_t universe_size,
                                      const std::vector<std::vector<std::size_t>>& sets,
                                      std::string name = {});

    std::size_t universe_size() const noexcept { return universe_; }
    const std::vector<BitVec>& sets() const noexcept { return sets_; }
    std::size_t size() const noexcept { return sets_.size(); }
    bool empty() const noexcept { return sets_.empty(); }
    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    bool contains(const BitVec& s) const;

    // Family members (by index into sets()) containing element x.
    BitVec column(std::size_t x) const;

    friend bool operator==(const SetSystem& a, const SetSystem& b) {
        return a.universe_ == b.universe_ && a.sets_ == b.sets_;
    }

private:
    std::size_t universe_ = 0;
    std::vector<BitVec> sets_;
    std::string name_;
};

// Trace of F on Y, re-indexed to [|Y|] in ascending order of Y.
SetSystem project(const SetSystem& F, std::span<const std::size_t> Y);
SetSystem project(const SetSystem& F, const BitVec& Y);

// Base set = members of F (by index); one set per universe element.
SetSystem dual(const SetSystem& F);

// F_sigma: members whose membership of xs[i] equals sigma[i] for every i.
SetSystem child(const SetSystem& F, std::span<const std::size_t> xs, const std::vector<bool>& sigma);

// Subfamily selected by a mask over family indices.
SetSystem subfamily(const SetSystem& F, const BitVec& mask);

namespace gen {

SetSystem powerset(std::size_t n);
SetSystem singletons_with_empty(std::size_t n);
SetSystem thresholds(std::size_t n);
SetSystem intervals(std::size_t n);  // all [a, b) with 0 <= a <= b <= n (empty included)
SetSystem all_subsets_of_size_at_most(std::size_t n, std::size_t d);

}  // namespace gen

}  // namespace shatterlab
