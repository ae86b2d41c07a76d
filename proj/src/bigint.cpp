#include "bdkex/bigint.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cctype>

#include "bdkex/errors.hpp"

namespace bdkex {

std::string to_hex(const BigInt& v) {
  if (v == 0) {
    return "0";
  }
  std::string s = v.str(0, std::ios_base::hex);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

BigInt from_hex(const std::string& s) {
  if (s.empty()) {
    throw ConfigError("from_hex: empty string");
  }
  for (char c : s) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw ConfigError("from_hex: invalid hex character in \"" + s + "\"");
    }
  }
  return BigInt("0x" + s);
}

unsigned bit_length(const BigInt& v) {
  if (v == 0) {
    return 0;
  }
  return static_cast<unsigned>(boost::multiprecision::msb(v)) + 1;
}

}  // namespace bdkex
