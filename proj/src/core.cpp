#include "shatterlab/bitvec.hpp"
#include "shatterlab/caps.hpp"
#include "shatterlab/combinatorics.hpp"
#include "shatterlab/errors.hpp"
#include "shatterlab/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace shatterlab {

BitVec BitVec::from_string(std::string_view s) {
    BitVec b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            b.set(i);
        else if (s[i] != '0')
            throw InputError("bit string has character '" + std::string(1, s[i]) + "' at position " +
                             std::to_string(i));
    }
    return b;
}

std::vector<std::size_t> BitVec::indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word) {
            out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
            word &= word - 1;
        }
    }
    return out;
}

std::string BitVec::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (test(i)) s[i] = '1';
    return s;
}

std::optional<std::size_t> cap_override_from_env() {
    const char* v = std::getenv("SHATTERLAB_CAP");
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (*end != '\0') return std::nullopt;
    return static_cast<std::size_t>(n);
}

Caps Caps::from_env() {
    if (auto n = cap_override_from_env()) return with_override(*n);
    return Caps{};
}

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw InputError("malformed rational '" + std::string(whole) + "'");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw InputError("malformed rational '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt p = parse_integer(text.substr(0, slash), text);
        BigInt q = parse_integer(text.substr(slash + 1), text);
        if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
        return Rational(p, q);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view head = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        if (!head.empty() && (head[0] == '-' || head[0] == '+')) head.remove_prefix(1);
        BigInt ip = head.empty() ? BigInt(0) : parse_integer(head, text);
        BigInt fp = frac.empty() ? BigInt(0) : parse_integer(frac, text);
        if (!frac.empty() && (frac[0] == '-' || frac[0] == '+'))
            throw InputError("malformed rational '" + std::string(text) + "'");
        BigInt scale = ipow(BigInt(10), frac.size());
        Rational r(ip * scale + fp, scale);
        return neg ? Rational(-r) : r;
    }
    return Rational(parse_integer(text, text));
}

std::string format_rational(const Rational& q) {
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt binomial_prefix_sum(std::uint64_t n, long long upto) {
    BigInt s = 0;
    for (long long i = 0; i <= upto && static_cast<std::uint64_t>(i) <= n; ++i) s += binomial(n, i);
    return s;
}

BigInt ipow(const BigInt& base, std::uint64_t exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

std::vector<std::uint64_t> combinations_as_masks(std::size_t n, std::size_t k) {
    std::vector<std::uint64_t> out;
    for_each_combination(n, k, [&](std::span<const std::size_t> c) {
        std::uint64_t m = 0;
        for (auto i : c) m |= std::uint64_t{1} << i;
        out.push_back(m);
        return true;
    });
    return out;
}

}  // namespace shatterlab
