#include "bdkex/rng.hpp"

#include "bdkex/errors.hpp"

namespace bdkex {

namespace {

// splitmix64 finalizer; spreads seed/actor bits before feeding mt19937_64.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

SeedStream::SeedStream(std::uint64_t run_seed, std::uint32_t actor_id)
    : engine_(mix64(mix64(run_seed) ^ (0x100000001b3ull * (std::uint64_t{actor_id} + 1)))) {}

std::uint64_t SeedStream::next_u64() { return engine_(); }

BigInt SeedStream::next_bits(unsigned bits) {
  if (bits == 0) {
    return 0;
  }
  const unsigned words = (bits + 63) / 64;
  BigInt v = 0;
  for (unsigned i = 0; i < words; ++i) {
    v <<= 64;
    v |= BigInt(next_u64());
  }
  const BigInt mask = (BigInt(1) << bits) - 1;
  v &= mask;
  return v;
}

BigInt SeedStream::uniform_below(const BigInt& bound) {
  if (bound < 1) {
    throw ConfigError("uniform_below: bound must be positive");
  }
  if (bound == 1) {
    return 0;
  }
  const unsigned bits = bit_length(bound - 1);
  while (true) {
    BigInt v = next_bits(bits);
    if (v < bound) {
      return v;
    }
  }
}

}  // namespace bdkex
