#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace shatterlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q", integers, and finite decimals ("0.125", "-3.5").
Rational parse_rational(std::string_view text);

// Always "p/q" with q >= 1 and gcd(p, q) = 1.
std::string format_rational(const Rational& q);

BigInt binomial(std::uint64_t n, std::uint64_t k);

// sum_{i=0}^{upto} C(n, i); zero when upto < 0.
BigInt binomial_prefix_sum(std::uint64_t n, long long upto);

BigInt ipow(const BigInt& base, std::uint64_t exp);

}  // namespace shatterlab
