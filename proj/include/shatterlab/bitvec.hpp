#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace shatterlab {

// Fixed-length bit vector. Used both for subsets of a universe [n] and for
// subfamily masks over the members of a family.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVec full(std::size_t size) {
        BitVec b(size);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    // '0'/'1' string, character i is bit i.
    static BitVec from_string(std::string_view s);

    std::size_t size() const noexcept { return size_; }
    bool empty_set() const noexcept {
        return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
    }

    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) noexcept {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // Indices of set bits, ascending.
    std::vector<std::size_t> indices() const;

    std::string to_string() const;

    BitVec& operator&=(const BitVec& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    BitVec& operator|=(const BitVec& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    BitVec& and_not(const BitVec& o) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    BitVec operator~() const {
        BitVec r = *this;
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

    bool subset_of(const BitVec& o) const noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    // Numeric order: bit i has weight 2^i.
    friend bool operator<(const BitVec& a, const BitVec& b) noexcept {
        if (a.size_ != b.size_) return a.size_ < b.size_;
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
        return false;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ull ^ size_;
        for (auto w : words_) {
            h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    void trim() noexcept {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec& b) const noexcept { return b.hash(); }
};

}  // namespace shatterlab
