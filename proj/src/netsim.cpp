#include "bdkex/netsim.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bdkex/errors.hpp"

namespace bdkex {

std::string tap_action_name(TapAction a) {
  switch (a) {
    case TapAction::Delivered:
      return "delivered";
    case TapAction::Dropped:
      return "dropped";
    case TapAction::Replaced:
      return "replaced";
    case TapAction::Injected:
      return "injected";
  }
  return "unknown";
}

void Transcript::append(TranscriptEvent ev) { events_.push_back(std::move(ev)); }

std::uint64_t Transcript::count(TapAction a) const {
  return static_cast<std::uint64_t>(
      std::count_if(events_.begin(), events_.end(),
                    [a](const TranscriptEvent& ev) { return ev.action == a; }));
}

namespace {

std::string actor_name(int id) {
  return id == kAttacker ? "A" : std::to_string(id);
}

std::string dest_name(int id) {
  return id == kBroadcastDest ? "*" : std::to_string(id);
}

}  // namespace

std::string Transcript::event_to_json(const TranscriptEvent& ev) {
  nlohmann::ordered_json j;
  j["seq"] = ev.seq;
  j["true_origin"] = actor_name(ev.true_origin);
  j["claimed_sender"] = ev.claimed_sender;
  j["destination"] = dest_name(ev.destination);
  j["round"] = static_cast<int>(ev.round);
  j["action"] = tap_action_name(ev.action);
  j["payload"] = to_hex(ev.payload);
  if (ev.payload_original) {
    j["payload_original"] = to_hex(*ev.payload_original);
  }
  return j.dump();
}

std::string Transcript::to_jsonl() const {
  std::ostringstream os;
  for (const auto& ev : events_) {
    os << event_to_json(ev) << "\n";
  }
  return os.str();
}

Network::Network(int n) : n_(n) {
  if (n_ < 3) {
    throw InvalidSizeError("network: party count must be >= 3");
  }
}

void Network::install_tap(int victim, TapHandler handler) {
  if (victim < 1 || victim > n_) {
    throw ConfigError("install_tap: victim out of range [1, n]");
  }
  if (tap_victim_) {
    throw ConfigError("install_tap: a tap is already installed");
  }
  tap_victim_ = victim;
  tap_ = std::move(handler);
}

TranscriptEvent Network::make_event(const Delivery& d, TapAction action) {
  TranscriptEvent ev;
  ev.seq = next_seq_++;
  ev.true_origin = d.true_origin;
  ev.claimed_sender = d.msg.claimed_sender;
  ev.destination = d.destination;
  ev.round = d.msg.round;
  ev.action = action;
  ev.payload = d.msg.payload.value();
  return ev;
}

void Network::enqueue_injections(std::vector<Injection>&& injections) {
  for (auto& inj : injections) {
    if (inj.destination < 1 || inj.destination > n_) {
      throw RoutingError("inject: destination out of range [1, n]");
    }
    pending_.push_back({kAttacker, inj.destination, std::move(inj.msg)});
  }
}

void Network::broadcast(int origin, const Message& msg) {
  if (origin != kAttacker && (origin < 1 || origin > n_)) {
    throw RoutingError("broadcast: unknown origin " + std::to_string(origin));
  }
  Message out = msg;
  if (tap_victim_ && origin == *tap_victim_) {
    // Outbound interposition happens once per broadcast, before fan-out.
    TapEvent ev{true, origin, kBroadcastDest, msg};
    TapDecision decision = tap_(ev);
    switch (decision.verdict) {
      case TapDecision::Verdict::Drop: {
        auto tev = make_event({origin, kBroadcastDest, msg}, TapAction::Dropped);
        transcript_.append(std::move(tev));
        enqueue_injections(std::move(decision.inject));
        return;
      }
      case TapDecision::Verdict::Replace: {
        if (!decision.replacement) {
          throw ConfigError("tap: replace verdict without replacement message");
        }
        auto tev = make_event({origin, kBroadcastDest, *decision.replacement},
                              TapAction::Replaced);
        tev.payload_original = msg.payload.value();
        transcript_.append(std::move(tev));
        out = *decision.replacement;
        break;
      }
      case TapDecision::Verdict::Deliver:
        break;
      case TapDecision::Verdict::Defer:
        throw ConfigError("tap: outbound broadcasts cannot be deferred");
    }
    enqueue_injections(std::move(decision.inject));
  }
  for (int dest = 1; dest <= n_; ++dest) {
    if (dest == origin) {
      continue;
    }
    pending_.push_back({origin, dest, out});
  }
}

void Network::inject(int destination, const Message& msg) {
  if (destination < 1 || destination > n_) {
    throw RoutingError("inject: destination out of range [1, n]");
  }
  pending_.push_back({kAttacker, destination, msg});
}

std::optional<StepResult> Network::step() {
  while (!pending_.empty()) {
    Delivery d = std::move(pending_.front());
    pending_.pop_front();

    const bool tapped = tap_victim_ && d.destination == *tap_victim_;
    if (!tapped) {
      defer_streak_ = 0;
      TapAction action =
          d.true_origin == kAttacker ? TapAction::Injected : TapAction::Delivered;
      auto ev = make_event(d, action);
      d.msg.seq = ev.seq;
      StepResult result{ev, std::make_pair(d.destination, d.msg)};
      transcript_.append(std::move(ev));
      return result;
    }

    TapEvent tev{false, d.true_origin, d.destination, d.msg};
    TapDecision decision = tap_(tev);
    if (decision.verdict == TapDecision::Verdict::Defer) {
      ++defer_streak_;
      if (defer_streak_ > 2 * pending_.size() + 2) {
        throw StuckRunError("network: tap keeps deferring delivery to party " +
                            std::to_string(d.destination) + " with no progress");
      }
      pending_.push_back(std::move(d));
      enqueue_injections(std::move(decision.inject));
      continue;
    }
    defer_streak_ = 0;

    switch (decision.verdict) {
      case TapDecision::Verdict::Deliver: {
        TapAction action =
            d.true_origin == kAttacker ? TapAction::Injected : TapAction::Delivered;
        auto ev = make_event(d, action);
        d.msg.seq = ev.seq;
        StepResult result{ev, std::make_pair(d.destination, d.msg)};
        transcript_.append(std::move(ev));
        enqueue_injections(std::move(decision.inject));
        return result;
      }
      case TapDecision::Verdict::Replace: {
        if (!decision.replacement) {
          throw ConfigError("tap: replace verdict without replacement message");
        }
        Message final_msg = *decision.replacement;
        auto ev = make_event({d.true_origin, d.destination, final_msg}, TapAction::Replaced);
        ev.payload_original = d.msg.payload.value();
        final_msg.seq = ev.seq;
        StepResult result{ev, std::make_pair(d.destination, final_msg)};
        transcript_.append(std::move(ev));
        enqueue_injections(std::move(decision.inject));
        return result;
      }
      case TapDecision::Verdict::Drop: {
        auto ev = make_event(d, TapAction::Dropped);
        StepResult result{ev, std::nullopt};
        transcript_.append(std::move(ev));
        enqueue_injections(std::move(decision.inject));
        return result;
      }
      case TapDecision::Verdict::Defer:
        break;  // handled above
    }
  }
  return std::nullopt;
}

void Network::shuffle_pending(SeedStream& rng) {
  // Fisher-Yates over the queue, driven by the caller's stream.
  for (std::size_t i = pending_.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform_below(BigInt(i)).convert_to<std::uint64_t>());
    std::swap(pending_[i - 1], pending_[j]);
  }
}

void Driver::after_round1(Network&, const std::vector<PartyState>&) {}
void Driver::after_round2(Network&, const std::vector<PartyState>&) {}

namespace {

void drain(Network& net, std::vector<PartyState>& parties) {
  while (auto result = net.step()) {
    if (result->delivery) {
      auto& [dest, msg] = *result->delivery;
      parties[static_cast<std::size_t>(dest - 1)] =
          receive(parties[static_cast<std::size_t>(dest - 1)], msg);
    }
  }
}

std::string format_missing(const std::vector<int>& missing) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < missing.size(); ++i) {
    os << (i ? ", " : "") << missing[i];
  }
  os << "}";
  return os.str();
}

}  // namespace

std::vector<GroupElement> run_to_quiescence(Network& net, std::vector<PartyState>& parties,
                                            std::vector<SeedStream>& rngs, Driver* driver) {
  if (parties.size() != static_cast<std::size_t>(net.n()) || rngs.size() != parties.size()) {
    throw ConfigError("run: parties and rng streams must match the network size");
  }
  for (const auto& party : parties) {
    if (party.phase() != Phase::Init) {
      throw StateMachineError("run: all parties must start in Init");
    }
  }

  for (std::size_t i = 0; i < parties.size(); ++i) {
    auto [next, msg] = round1(parties[i], rngs[i]);
    parties[i] = std::move(next);
    net.broadcast(static_cast<int>(i) + 1, msg);
  }
  drain(net, parties);
  if (driver) {
    driver->after_round1(net, parties);
    drain(net, parties);
  }

  for (std::size_t i = 0; i < parties.size(); ++i) {
    auto missing = parties[i].missing_round2_inputs();
    if (!missing.empty()) {
      throw StuckRunError("stuck run: party " + std::to_string(parties[i].index()) +
                          " cannot start round 2; missing z from " + format_missing(missing));
    }
    auto [next, msg] = round2(parties[i]);
    parties[i] = std::move(next);
    net.broadcast(static_cast<int>(i) + 1, msg);
  }
  drain(net, parties);
  if (driver) {
    driver->after_round2(net, parties);
    drain(net, parties);
  }

  std::vector<GroupElement> keys;
  keys.reserve(parties.size());
  for (auto& party : parties) {
    auto missing = party.missing_key_inputs();
    if (!missing.empty()) {
      throw StuckRunError("stuck run: party " + std::to_string(party.index()) +
                          " cannot compute its key; missing X from " + format_missing(missing));
    }
    auto [next, key] = compute_key(party);
    party = std::move(next);
    keys.push_back(std::move(key));
  }
  return keys;
}

}  // namespace bdkex
