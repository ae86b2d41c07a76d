#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace bdkex {

// Arbitrary-precision integer. GMP-backed; arithmetic is NOT constant-time,
// which is fine here: this library simulates a logical attack and never
// handles real secrets.
using BigInt = boost::multiprecision::mpz_int;

// Lowercase hex, minimal digits, no prefix ("0" for zero).
std::string to_hex(const BigInt& v);

// Parses lowercase/uppercase hex without prefix. Throws ConfigError on
// empty input or non-hex characters.
BigInt from_hex(const std::string& s);

// Number of bits in v (0 for v == 0).
unsigned bit_length(const BigInt& v);

}  // namespace bdkex
