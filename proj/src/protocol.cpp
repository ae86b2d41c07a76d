#include "bdkex/protocol.hpp"

#include <sstream>

#include "bdkex/errors.hpp"

namespace bdkex {

int wrap_index(int j, int n) {
  int m = (j - 1) % n;
  if (m < 0) {
    m += n;
  }
  return m + 1;
}

PartyState::PartyState(GroupPtr params, int index, int n)
    : params_(std::move(params)), index_(index), n_(n) {
  if (n_ < 3) {
    throw InvalidSizeError("party: group size must be >= 3");
  }
  if (index_ < 1 || index_ > n_) {
    throw ConfigError("party: index out of range [1, n]");
  }
}

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << (i ? ", " : "") << v[i];
  }
  return os.str();
}

}  // namespace

std::vector<int> PartyState::missing_round2_inputs() const {
  std::vector<int> missing;
  for (int j : {wrap_index(index_ - 1, n_), wrap_index(index_ + 1, n_)}) {
    if (!received_z_.contains(j)) {
      missing.push_back(j);
    }
  }
  return missing;
}

std::vector<int> PartyState::missing_key_inputs() const {
  std::vector<int> missing;
  for (int j = 1; j <= n_ - 2; ++j) {
    int idx = wrap_index(index_ + j, n_);
    if (!received_X_.contains(idx)) {
      missing.push_back(idx);
    }
  }
  return missing;
}

std::vector<GroupElement> PartyState::x_view() const {
  std::vector<GroupElement> view;
  view.reserve(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) {
    auto it = received_X_.find(i);
    if (it == received_X_.end()) {
      throw IncompleteRoundError("x_view: missing X from party " + std::to_string(i));
    }
    view.push_back(it->second);
  }
  return view;
}

std::pair<PartyState, Message> round1_with_secret(const PartyState& party, const Scalar& r) {
  if (party.phase_ != Phase::Init) {
    throw StateMachineError("round1: party " + std::to_string(party.index_) + " is not in Init");
  }
  if (r.modulus() != party.params_->q) {
    throw DomainMismatchError("round1: secret modulus does not match group order");
  }
  PartyState next = party;
  next.secret_ = r;
  GroupElement z = exp(GroupElement::generator(party.params_), r);
  next.received_z_.insert_or_assign(party.index_, z);
  next.phase_ = Phase::SentZ;
  return {std::move(next), Message{party.index_, Round::One, std::move(z)}};
}

std::pair<PartyState, Message> round1(const PartyState& party, SeedStream& rng) {
  if (party.phase_ != Phase::Init) {
    throw StateMachineError("round1: party " + std::to_string(party.index_) + " is not in Init");
  }
  return round1_with_secret(party, random_scalar(rng, party.params_->q));
}

std::pair<PartyState, Message> round2(const PartyState& party) {
  if (party.phase_ != Phase::SentZ) {
    throw StateMachineError("round2: party " + std::to_string(party.index_) + " is not in SentZ");
  }
  auto missing = party.missing_round2_inputs();
  if (!missing.empty()) {
    throw IncompleteRoundError("round2: party " + std::to_string(party.index_) +
                               " missing z from {" + join(missing) + "}");
  }
  const GroupElement& z_next = party.received_z_.at(wrap_index(party.index_ + 1, party.n_));
  const GroupElement& z_prev = party.received_z_.at(wrap_index(party.index_ - 1, party.n_));
  GroupElement x = exp(div(z_next, z_prev), *party.secret_);
  PartyState next = party;
  next.received_X_.insert_or_assign(party.index_, x);
  next.phase_ = Phase::SentX;
  return {std::move(next), Message{party.index_, Round::Two, std::move(x)}};
}

std::pair<PartyState, GroupElement> compute_key(const PartyState& party) {
  if (party.phase_ != Phase::SentX) {
    throw StateMachineError("compute_key: party " + std::to_string(party.index_) +
                            " is not in SentX");
  }
  auto missing = party.missing_key_inputs();
  if (!missing.empty()) {
    throw IncompleteRoundError("compute_key: party " + std::to_string(party.index_) +
                               " missing X from {" + join(missing) + "}");
  }
  const GroupElement& z_prev = party.received_z_.at(wrap_index(party.index_ - 1, party.n_));
  GroupElement key = bd_key(party.n_, party.index_, *party.secret_, z_prev, party.received_X_);
  PartyState next = party;
  next.key_ = key;
  next.phase_ = Phase::Done;
  return {std::move(next), std::move(key)};
}

PartyState receive(const PartyState& party, const Message& msg) {
  if (msg.payload.params()->digest != party.params_->digest) {
    throw DomainMismatchError("receive: payload from a different group");
  }
  if (msg.claimed_sender < 1 || msg.claimed_sender > party.n_) {
    throw RoutingError("receive: claimed sender out of range");
  }
  PartyState next = party;
  if (msg.round == Round::One) {
    next.received_z_.insert_or_assign(msg.claimed_sender, msg.payload);
  } else {
    next.received_X_.insert_or_assign(msg.claimed_sender, msg.payload);
  }
  return next;
}

GroupElement bd_key(int n, int i, const Scalar& r_i, const GroupElement& z_prev,
                    const std::map<int, GroupElement>& x_values) {
  const BigInt& q = z_prev.params()->q;
  // z_{i-1}^(n * r_i); the exponent reduction mod q is sound because every
  // element order divides q.
  Scalar n_ri = Scalar::from_int(n, q) * r_i;
  GroupElement key = exp(z_prev, n_ri);
  for (int j = 0; j <= n - 2; ++j) {
    int idx = wrap_index(i + j, n);
    auto it = x_values.find(idx);
    if (it == x_values.end()) {
      throw IncompleteRoundError("bd_key: missing X from party " + std::to_string(idx));
    }
    Scalar e = Scalar::from_int(n - 1 - j, q);
    key = mul(key, exp(it->second, e));
  }
  return key;
}

GroupElement closed_form_key(const GroupPtr& params, const std::vector<Scalar>& r) {
  if (r.size() < 3) {
    throw InvalidSizeError("closed_form_key: need at least 3 exponents");
  }
  Scalar sum = Scalar::zero(params->q);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Scalar& next = r[(i + 1) % r.size()];
    sum = sum + r[i] * next;
  }
  return exp(GroupElement::generator(params), sum);
}

bool product_check(const std::vector<GroupElement>& all_x) {
  if (all_x.empty()) {
    return true;
  }
  GroupElement prod = GroupElement::identity(all_x.front().params());
  for (const auto& x : all_x) {
    prod = mul(prod, x);
  }
  return prod.is_identity();
}

}  // namespace bdkex
