#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bdkex/group.hpp"

namespace bdkex {

// Parties are numbered 1..n; wrap_index maps any integer offset into that
// range, so wrap_index(0, n) == n and wrap_index(n+1, n) == 1.
int wrap_index(int j, int n);

enum class Round : int { One = 1, Two = 2 };

enum class Phase { Init, SentZ, SentX, Done };

/**
 * A round-1 or round-2 broadcast. claimed_sender is whatever the message
 * says, which an interposed adversary may forge; the simulated network
 * tracks true origins separately.
 */
struct Message {
  int claimed_sender = 0;
  Round round = Round::One;
  GroupElement payload;
  std::uint64_t seq = 0;  // delivery counter, assigned by the network
};

/**
 * One participant of the two-round cyclic key exchange.
 *
 * Round 1 samples a secret r_i and broadcasts z_i = g^r_i. Round 2
 * broadcasts X_i = (z_{i+1}/z_{i-1})^r_i. The key is then
 *
 *   K_i = z_{i-1}^(n*r_i) * X_i^(n-1) * X_{i+1}^(n-2) * ... * X_{i+n-2}
 *
 * with indices cyclic and exponents reduced mod q. All transitions are
 * value-to-value; the phase advances Init -> SentZ -> SentX -> Done and
 * never retreats.
 */
class PartyState {
 public:
  PartyState(GroupPtr params, int index, int n);

  int index() const { return index_; }
  int n() const { return n_; }
  Phase phase() const { return phase_; }
  const GroupPtr& params() const { return params_; }
  const std::optional<Scalar>& secret() const { return secret_; }
  const std::optional<GroupElement>& key() const { return key_; }
  const std::map<int, GroupElement>& received_z() const { return received_z_; }
  const std::map<int, GroupElement>& received_X() const { return received_X_; }

  // Indices whose z (resp. X) the party still needs before it can advance.
  std::vector<int> missing_round2_inputs() const;
  std::vector<int> missing_key_inputs() const;

  // X-values of the party's complete view, ordered by index 1..n. Only
  // valid once every index is present (own X included).
  std::vector<GroupElement> x_view() const;

 private:
  GroupPtr params_;
  int index_;
  int n_;
  Phase phase_ = Phase::Init;
  std::optional<Scalar> secret_;
  std::map<int, GroupElement> received_z_;
  std::map<int, GroupElement> received_X_;
  std::optional<GroupElement> key_;

  friend std::pair<PartyState, Message> round1(const PartyState&, SeedStream&);
  friend std::pair<PartyState, Message> round1_with_secret(const PartyState&, const Scalar&);
  friend std::pair<PartyState, Message> round2(const PartyState&);
  friend std::pair<PartyState, GroupElement> compute_key(const PartyState&);
  friend PartyState receive(const PartyState&, const Message&);
};

// Samples r_i from the party's stream and broadcasts z_i = g^r_i.
std::pair<PartyState, Message> round1(const PartyState& party, SeedStream& rng);

// Test hook: round 1 with a caller-chosen secret.
std::pair<PartyState, Message> round1_with_secret(const PartyState& party, const Scalar& r);

// Broadcasts X_i = (z_{i+1}/z_{i-1})^r_i. Needs both neighbors' z-values.
std::pair<PartyState, Message> round2(const PartyState& party);

// Computes K_i from z_{i-1}, the party's own X_i, and X_{i+1}..X_{i+n-2}.
std::pair<PartyState, GroupElement> compute_key(const PartyState& party);

// Records an incoming broadcast under its claimed sender. Recording is
// passive and allowed in any phase; later values overwrite earlier ones.
PartyState receive(const PartyState& party, const Message& msg);

// The key formula evaluated for position i with secret r_i, given z_{i-1}
// and a map holding X_{i+j} for j = 0..n-2. Shared by honest parties and
// by an adversary playing some position.
GroupElement bd_key(int n, int i, const Scalar& r_i, const GroupElement& z_prev,
                    const std::map<int, GroupElement>& x_values);

// g^(r_1 r_2 + r_2 r_3 + ... + r_n r_1). Every honest participant's key
// equals this; tests use it as the independent oracle.
GroupElement closed_form_key(const GroupPtr& params, const std::vector<Scalar>& r);

// True iff the product of the given X-values is the identity. Holds in
// every honest run; a checking party can use it to probe for tampering.
bool product_check(const std::vector<GroupElement>& all_x);

}  // namespace bdkex
