#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qb {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Exact integer square root test.
bool int_is_square(const Int& n, Int* root = nullptr);

// A rational is a square iff numerator and denominator both are.
bool rat_is_square(const Rat& r);

// "a/b" with the "/b" part omitted for integers.
std::string rat_str(const Rat& r);

// Parses "123", "-4/7". Throws Error(BadInput) on malformed text.
Rat rat_parse(const std::string& text);

}  // namespace qb
