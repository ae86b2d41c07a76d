#pragma once

#include <cstdint>
#include <random>

#include "bdkex/bigint.hpp"

namespace bdkex {

/**
 * Deterministic per-actor random stream.
 *
 * Every draw in a run comes from a substream derived from (run seed,
 * actor id), so the values an actor samples depend only on its own draw
 * order, never on how actors interleave. The underlying engine is
 * std::mt19937_64, whose output sequence is fixed by the standard, so
 * replays are portable across builds and platforms.
 */
class SeedStream {
 public:
  static constexpr std::uint32_t kAttackerActor = 0;
  static constexpr std::uint32_t kGroupGenActor = 0xffffffffu;

  SeedStream(std::uint64_t run_seed, std::uint32_t actor_id);

  std::uint64_t next_u64();

  // The low `bits` bits assembled from consecutive 64-bit draws.
  BigInt next_bits(unsigned bits);

  // Uniform in [0, bound) by rejection sampling on bit_length(bound-1)-bit
  // draws. bound must be >= 1.
  BigInt uniform_below(const BigInt& bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bdkex
