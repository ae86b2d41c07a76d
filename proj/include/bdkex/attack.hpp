#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bdkex/netsim.hpp"

namespace bdkex {

/**
 * Samples the attacker's secret exponent a uniformly over scalars with
 * a != 1 (resampling on 1), so that a - 1 is invertible, and returns it
 * together with b = (a - 1)^-1.
 */
std::pair<Scalar, Scalar> choose_a(SeedStream& rng, const BigInt& q);

/**
 * The round-2 values fed to the victim in place of the real ones. X maps
 * every index except the victim's to a forged value; h holds the n-3
 * blinding elements the construction consumed. evading_value is the one
 * choice of X_{k-1} that makes the victim's full product collapse to the
 * identity; X[k-1] equals it when evasion is on and is an independent
 * random element otherwise.
 */
struct ForgedList {
  std::map<int, GroupElement> X;
  std::vector<GroupElement> h;
  GroupElement evading_value;
};

/**
 * Builds the forged list from the captured X_k, the recovered s = X_k^b,
 * and the key K agreed with the non-victim parties:
 *
 *   X_{k+1} = s^-1 h_1
 *   X_{k+j} = h_{j-1}^-1 h_j            for j = 2..n-3
 *   X_{k-2} = K X_k^-(n-1) s^-2 h_{n-3}^-2 (h_1 ... h_{n-4})^-1
 *
 * with empty products read as the identity (n = 4 leaves only the first
 * and third slot). For n = 3 both formulas collapse into the single slot
 * X_{k+1} = K X_k^-2 s^-3. Any h choice yields the same victim key; the
 * blinding only hides the structure. forced_h pins the blinding values
 * for tests; it must hold exactly max(n-3, 0) elements.
 */
ForgedList forge_X_list(int n, int k, const GroupElement& captured_Xk, const GroupElement& s,
                        const GroupElement& K, SeedStream& rng, bool evade,
                        const std::vector<GroupElement>* forced_h = nullptr);

/**
 * The active adversary on party k's link. As the tap handler it
 * suppresses the victim's broadcasts, substitutes z'_k = g^a toward
 * everyone else, rewrites the inbound z_{k+1} to z_{k-1}^a, and captures
 * the victim's X_k. As the driver it completes the real protocol with
 * the non-victim parties at position k under exponent a, then feeds the
 * victim a forged X-list that makes it compute the same key K.
 *
 * One instance serves one run: install handler() as the network tap for
 * party k and pass the object as the run's driver. The object must
 * outlive the run.
 */
class Attacker : public Driver {
 public:
  // Draws a (never 1) from the attacker's seed substream.
  Attacker(GroupPtr params, int n, int victim, std::uint64_t run_seed);

  // Test hook with a caller-chosen exponent. Throws NonInvertibleError
  // when a == 1 mod q, since b = (a - 1)^-1 then does not exist.
  Attacker(GroupPtr params, int n, int victim, std::uint64_t run_seed, const Scalar& forced_a);

  TapHandler handler();

  void after_round1(Network& net, const std::vector<PartyState>& parties) override;
  void after_round2(Network& net, const std::vector<PartyState>& parties) override;

  // When off, X_{k-1} in the forged list is a random element instead of
  // the evading value, so the victim's product check catches the attack.
  void set_evasion(bool on) { evasion_ = on; }

  int victim() const { return k_; }
  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }
  const std::map<int, GroupElement>& seen_z() const { return seen_z_; }
  const std::map<int, GroupElement>& seen_X() const { return seen_X_; }
  const std::optional<GroupElement>& own_X() const { return own_X_; }
  const std::optional<GroupElement>& captured_Xk() const { return captured_Xk_; }
  const std::optional<GroupElement>& s() const { return s_; }
  const std::optional<GroupElement>& key() const { return key_; }
  const std::optional<ForgedList>& forged() const { return forged_; }

 private:
  TapDecision on_tap(const TapEvent& ev);
  TapDecision on_round1(const TapEvent& ev);
  TapDecision on_round2(const TapEvent& ev);

  GroupPtr params_;
  int n_;
  int k_;
  SeedStream rng_;
  Scalar a_;
  Scalar b_;
  bool evasion_ = true;
  std::map<int, GroupElement> seen_z_;
  std::map<int, GroupElement> seen_X_;
  std::optional<GroupElement> own_X_;
  std::optional<GroupElement> captured_Xk_;
  std::optional<GroupElement> s_;
  std::optional<GroupElement> key_;
  std::optional<ForgedList> forged_;
};

}  // namespace bdkex
