#include "bdkex/attack.hpp"

#include <sstream>

#include "bdkex/errors.hpp"

namespace bdkex {

std::pair<Scalar, Scalar> choose_a(SeedStream& rng, const BigInt& q) {
  for (;;) {
    Scalar a = random_scalar(rng, q);
    if (a.value() == 1) {
      continue;
    }
    Scalar b = scalar_inverse(a - Scalar::one(q));
    return {std::move(a), std::move(b)};
  }
}

ForgedList forge_X_list(int n, int k, const GroupElement& captured_Xk, const GroupElement& s,
                        const GroupElement& K, SeedStream& rng, bool evade,
                        const std::vector<GroupElement>* forced_h) {
  if (n < 3) {
    throw InvalidSizeError("forge: group size must be >= 3");
  }
  const GroupPtr& params = captured_Xk.params();
  const BigInt& q = params->q;

  const int hcount = n - 3;
  std::vector<GroupElement> h;
  if (forced_h) {
    if (static_cast<int>(forced_h->size()) != hcount) {
      throw ConfigError("forge: forced blinding list must hold exactly n - 3 elements");
    }
    h = *forced_h;
  } else {
    h.reserve(static_cast<std::size_t>(hcount));
    for (int i = 0; i < hcount; ++i) {
      h.push_back(random_element(params, rng));
    }
  }

  std::map<int, GroupElement> X;
  if (n == 3) {
    // Two slots collapse into one: the unique value solving K_k = K.
    GroupElement v = mul(K, inverse(exp(captured_Xk, Scalar::from_int(2, q))));
    v = mul(v, inverse(exp(s, Scalar::from_int(3, q))));
    X.insert({wrap_index(k + 1, n), std::move(v)});
  } else {
    X.insert({wrap_index(k + 1, n), mul(inverse(s), h[0])});
    for (int j = 2; j <= n - 3; ++j) {
      X.insert({wrap_index(k + j, n),
                mul(inverse(h[static_cast<std::size_t>(j - 2)]),
                    h[static_cast<std::size_t>(j - 1)])});
    }
    GroupElement v = mul(K, inverse(exp(captured_Xk, Scalar::from_int(n - 1, q))));
    v = mul(v, inverse(exp(s, Scalar::from_int(2, q))));
    v = mul(v, inverse(exp(h[static_cast<std::size_t>(n - 4)], Scalar::from_int(2, q))));
    for (int r = 1; r <= n - 4; ++r) {
      v = mul(v, inverse(h[static_cast<std::size_t>(r - 1)]));
    }
    X.insert({wrap_index(k - 2, n), std::move(v)});
  }

  // The victim multiplies its own true X_k into the product, so the
  // evading slot must cancel that too.
  GroupElement prod = captured_Xk;
  for (const auto& [idx, x] : X) {
    (void)idx;
    prod = mul(prod, x);
  }
  GroupElement evading = inverse(prod);

  const int km1 = wrap_index(k - 1, n);
  if (evade) {
    X.insert_or_assign(km1, evading);
  } else {
    X.insert_or_assign(km1, random_element(params, rng));
  }
  return ForgedList{std::move(X), std::move(h), std::move(evading)};
}

namespace {

Scalar checked_a(const Scalar& a) {
  if (a.value() == 1) {
    throw NonInvertibleError("attacker exponent a = 1 has no usable b = (a - 1)^-1");
  }
  return a;
}

}  // namespace

Attacker::Attacker(GroupPtr params, int n, int victim, std::uint64_t run_seed)
    : params_(std::move(params)),
      n_(n),
      k_(victim),
      rng_(run_seed, SeedStream::kAttackerActor),
      a_(Scalar::zero(params_->q)),
      b_(Scalar::zero(params_->q)) {
  if (n_ < 3) {
    throw InvalidSizeError("attacker: group size must be >= 3");
  }
  if (k_ < 1 || k_ > n_) {
    throw ConfigError("attacker: victim index out of range [1, n]");
  }
  auto [a, b] = choose_a(rng_, params_->q);
  a_ = std::move(a);
  b_ = std::move(b);
}

Attacker::Attacker(GroupPtr params, int n, int victim, std::uint64_t run_seed,
                   const Scalar& forced_a)
    : params_(std::move(params)),
      n_(n),
      k_(victim),
      rng_(run_seed, SeedStream::kAttackerActor),
      a_(checked_a(forced_a)),
      b_(scalar_inverse(forced_a - Scalar::one(params_->q))) {
  if (n_ < 3) {
    throw InvalidSizeError("attacker: group size must be >= 3");
  }
  if (k_ < 1 || k_ > n_) {
    throw ConfigError("attacker: victim index out of range [1, n]");
  }
}

TapHandler Attacker::handler() {
  return [this](const TapEvent& ev) { return on_tap(ev); };
}

TapDecision Attacker::on_tap(const TapEvent& ev) {
  if (ev.true_origin == kAttacker) {
    // The attacker's own injections pass through untouched.
    return TapDecision::deliver();
  }
  return ev.msg.round == Round::One ? on_round1(ev) : on_round2(ev);
}

TapDecision Attacker::on_round1(const TapEvent& ev) {
  if (ev.outbound) {
    // Suppress the victim's z_k and impersonate it with z'_k = g^a
    // toward everyone else.
    seen_z_.insert_or_assign(k_, ev.msg.payload);
    GroupElement forged_z = exp(GroupElement::generator(params_), a_);
    TapDecision d = TapDecision::drop();
    for (int i = 1; i <= n_; ++i) {
      if (i == k_) {
        continue;
      }
      d.inject.push_back({i, Message{k_, Round::One, forged_z}});
    }
    return d;
  }

  const int sender = ev.msg.claimed_sender;
  if (sender == wrap_index(k_ + 1, n_)) {
    auto prev = seen_z_.find(wrap_index(k_ - 1, n_));
    if (prev == seen_z_.end()) {
      // The rewrite needs z_{k-1}; hold this delivery until it shows up.
      return TapDecision::defer();
    }
    seen_z_.insert_or_assign(sender, ev.msg.payload);
    GroupElement rewritten = exp(prev->second, a_);
    return TapDecision::replace(Message{sender, Round::One, std::move(rewritten)});
  }

  seen_z_.insert_or_assign(sender, ev.msg.payload);
  return TapDecision::deliver();
}

TapDecision Attacker::on_round2(const TapEvent& ev) {
  if (ev.outbound) {
    // Capture X_k, recover s = X_k^b, and keep X_k off the wire.
    captured_Xk_ = ev.msg.payload;
    GroupElement s = exp(ev.msg.payload, b_);
    if (exp(s, a_ - Scalar::one(params_->q)) != *captured_Xk_) {
      throw ProtocolDeviationError("victim's round-2 broadcast is not s^(a-1) for s = X_k^b");
    }
    s_ = std::move(s);
    return TapDecision::drop();
  }

  // Record the true X_i for the parallel run and keep it from the victim,
  // whose round-2 view will be the forged list instead.
  seen_X_.insert_or_assign(ev.msg.claimed_sender, ev.msg.payload);
  return TapDecision::drop();
}

void Attacker::after_round1(Network& net, const std::vector<PartyState>&) {
  auto next = seen_z_.find(wrap_index(k_ + 1, n_));
  auto prev = seen_z_.find(wrap_index(k_ - 1, n_));
  if (next == seen_z_.end() || prev == seen_z_.end()) {
    throw StuckRunError("attacker: a neighbor z value never crossed the tap in round 1");
  }
  // Play position k honestly toward the others, with exponent a and the
  // TRUE neighbor values, so their run is a plain honest execution.
  GroupElement own_x = exp(div(next->second, prev->second), a_);
  own_X_ = own_x;
  for (int i = 1; i <= n_; ++i) {
    if (i == k_) {
      continue;
    }
    net.inject(i, Message{k_, Round::Two, own_x});
  }
}

void Attacker::after_round2(Network& net, const std::vector<PartyState>&) {
  if (!captured_Xk_ || !s_ || !own_X_) {
    throw StuckRunError("attacker: the victim's round-2 broadcast never crossed the tap");
  }
  std::map<int, GroupElement> x_values = seen_X_;
  x_values.insert_or_assign(k_, *own_X_);

  std::ostringstream missing;
  for (int j = 0; j <= n_ - 2; ++j) {
    int idx = wrap_index(k_ + j, n_);
    if (!x_values.count(idx)) {
      missing << (missing.tellp() > 0 ? ", " : "") << idx;
    }
  }
  if (missing.tellp() > 0) {
    throw StuckRunError("attacker: cannot compute K; missing X from {" + missing.str() + "}");
  }

  key_ = bd_key(n_, k_, a_, seen_z_.at(wrap_index(k_ - 1, n_)), x_values);
  forged_ = forge_X_list(n_, k_, *captured_Xk_, *s_, *key_, rng_, evasion_);
  for (const auto& [idx, x] : forged_->X) {
    net.inject(k_, Message{idx, Round::Two, x});
  }
}

}  // namespace bdkex
