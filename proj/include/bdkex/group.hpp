#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "bdkex/bigint.hpp"
#include "bdkex/rng.hpp"

namespace bdkex {

/**
 * A Schnorr group: the order-q subgroup of (Z/pZ)* for primes p, q with
 * q | p-1, together with a generator g of that subgroup.
 *
 * Construction validates all invariants: p and q pass 40 Miller-Rabin
 * rounds (error <= 2^-80), q divides p-1, and g != 1 with g^q = 1 mod p,
 * which pins g's order to exactly q.
 */
struct GroupParams {
  BigInt p;
  BigInt q;
  BigInt g;
  std::uint64_t digest;  // value digest of (p, q, g); identifies the group

  std::string digest_hex() const;
};

using GroupPtr = std::shared_ptr<const GroupParams>;

// Validating constructor. Throws ConfigError if any invariant fails.
GroupPtr make_group_params(const BigInt& p, const BigInt& q, const BigInt& g);

// Fixed tiny group p=23, q=11, g=4. Small enough that oracles can sweep
// every exponent tuple exhaustively.
GroupPtr toy_group();

// Generates fresh parameters with p exactly `bits` bits: pick a prime q of
// bits-16 bits, search p = 2kq+1 prime, then g = h^((p-1)/q) != 1.
// Deterministic for a given stream state. bits must be >= 256.
GroupPtr schnorr_group(unsigned bits, SeedStream& rng);

// JSON object {"p": hex, "q": hex, "g": hex}, lowercase hex, no prefix.
GroupPtr group_params_from_json(const std::string& text);
std::string group_params_to_json(const GroupParams& params);
GroupPtr load_group_file(const std::string& path);

// 40 Miller-Rabin rounds with deterministically seeded witnesses.
bool is_probable_prime(const BigInt& n);

/**
 * Element of the order-q subgroup, canonical in [1, p-1]. Elements carry
 * their parameter set; operations refuse to combine elements from
 * different groups.
 */
class GroupElement {
 public:
  // Validating: checks range and subgroup membership (value^q = 1 mod p).
  GroupElement(GroupPtr params, const BigInt& value);

  static GroupElement identity(GroupPtr params);
  static GroupElement generator(GroupPtr params);

  const BigInt& value() const { return value_; }
  const GroupPtr& params() const { return params_; }
  bool is_identity() const { return value_ == 1; }
  std::string hex() const { return to_hex(value_); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.params_->digest == b.params_->digest && a.value_ == b.value_;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

 private:
  struct unchecked_t {};
  GroupElement(GroupPtr params, BigInt value, unchecked_t);

  BigInt value_;
  GroupPtr params_;

  friend GroupElement exp(const GroupElement&, const class Scalar&);
  friend GroupElement mul(const GroupElement&, const GroupElement&);
  friend GroupElement div(const GroupElement&, const GroupElement&);
  friend GroupElement inverse(const GroupElement&);
};

/**
 * Exponent in Z_q, stored canonically reduced to [0, q-1].
 */
class Scalar {
 public:
  // Reduces v mod q (negatives map into [0, q-1]).
  static Scalar from_int(const BigInt& v, const BigInt& q);
  static Scalar zero(const BigInt& q) { return from_int(0, q); }
  static Scalar one(const BigInt& q) { return from_int(1, q); }

  const BigInt& value() const { return value_; }
  const BigInt& modulus() const { return modulus_; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.modulus_ == b.modulus_ && a.value_ == b.value_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

 private:
  Scalar(BigInt value, BigInt modulus) : value_(std::move(value)), modulus_(std::move(modulus)) {}

  BigInt value_;
  BigInt modulus_;
};

// base^e mod p. The exponent's modulus must equal the base group's q.
GroupElement exp(const GroupElement& base, const Scalar& e);

// (x * y) mod p.
GroupElement mul(const GroupElement& x, const GroupElement& y);

// x * y^(p-2) mod p, i.e. division by the field inverse of y.
GroupElement div(const GroupElement& x, const GroupElement& y);

// y^(p-2) mod p.
GroupElement inverse(const GroupElement& y);

// Extended Euclid. Throws NonInvertibleError for s = 0.
Scalar scalar_inverse(const Scalar& s);

// Uniform in [0, q-1] by rejection sampling.
Scalar random_scalar(SeedStream& rng, const BigInt& q);

// g^u for uniform u; used for blinding values.
GroupElement random_element(const GroupPtr& params, SeedStream& rng);

}  // namespace bdkex
