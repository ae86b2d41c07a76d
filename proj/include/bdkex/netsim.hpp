#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdkex/protocol.hpp"
#include "bdkex/rng.hpp"

namespace bdkex {

// Actor ids on the wire: parties are 1..n, the adversary is kAttacker.
// kBroadcastDest marks an event that applies to a whole broadcast.
constexpr int kAttacker = 0;
constexpr int kBroadcastDest = -1;

enum class TapAction { Delivered, Dropped, Replaced, Injected };

std::string tap_action_name(TapAction a);

/**
 * One terminal delivery outcome. true_origin is who really sent the
 * message (the adversary for injected traffic), independent of the
 * claimed sender inside the message. Replaced events keep both payloads.
 */
struct TranscriptEvent {
  std::uint64_t seq = 0;
  int true_origin = 0;
  int claimed_sender = 0;
  int destination = 0;
  Round round = Round::One;
  TapAction action = TapAction::Delivered;
  BigInt payload;
  std::optional<BigInt> payload_original;
};

/**
 * Ordered, replayable log of everything the network did. Serializes to
 * JSON lines with a fixed field order so two identical runs produce
 * byte-identical logs.
 */
class Transcript {
 public:
  void append(TranscriptEvent ev);

  const std::vector<TranscriptEvent>& events() const { return events_; }
  std::uint64_t count(TapAction a) const;

  std::string to_jsonl() const;
  static std::string event_to_json(const TranscriptEvent& ev);

 private:
  std::vector<TranscriptEvent> events_;
};

/** What a tap handler sees for one delivery (or one outbound broadcast). */
struct TapEvent {
  bool outbound = false;  // true: victim's own broadcast, seen before fan-out
  int true_origin = 0;
  int destination = 0;  // kBroadcastDest when outbound
  Message msg;
};

struct Injection {
  int destination = 0;
  Message msg;
};

/**
 * A tap handler's ruling on one event. Deliver passes the message on
 * (attacker-injected traffic is logged as Injected rather than
 * Delivered); Replace substitutes the payload; Drop suppresses it; Defer
 * re-queues the event untouched so the handler can rule on it after later
 * traffic has been observed. Any ruling may also inject new messages,
 * which enter the queue as adversary traffic.
 */
struct TapDecision {
  enum class Verdict { Deliver, Replace, Drop, Defer };
  Verdict verdict = Verdict::Deliver;
  std::optional<Message> replacement;
  std::vector<Injection> inject;

  static TapDecision deliver() { return {}; }
  static TapDecision drop() { return {Verdict::Drop, std::nullopt, {}}; }
  static TapDecision defer() { return {Verdict::Defer, std::nullopt, {}}; }
  static TapDecision replace(Message m) { return {Verdict::Replace, std::move(m), {}}; }
};

using TapHandler = std::function<TapDecision(const TapEvent&)>;

struct StepResult {
  TranscriptEvent event;
  // Present when a message actually reached its destination.
  std::optional<std::pair<int, Message>> delivery;
};

/**
 * Deterministic broadcast medium. A broadcast fans out into one unicast
 * delivery per party, queued FIFO in ascending (origin, destination)
 * order, so the whole run is a pure function of its inputs.
 *
 * At most one party may be tapped. The tap sees the victim's outbound
 * broadcasts once each, before fan-out, and every inbound delivery headed
 * for the victim; nothing crosses the victim's link without a ruling.
 */
class Network {
 public:
  explicit Network(int n);

  int n() const { return n_; }

  // All traffic to and from `victim` is routed through `handler`.
  void install_tap(int victim, TapHandler handler);

  // Enqueues one delivery per party != origin. origin may be kAttacker.
  void broadcast(int origin, const Message& msg);

  // Enqueues a single adversary-originated delivery.
  void inject(int destination, const Message& msg);

  // Processes queued deliveries until one reaches a terminal outcome;
  // returns nullopt once the queue is empty.
  std::optional<StepResult> step();

  bool quiescent() const { return pending_.empty(); }

  // Test hook: permutes the pending queue. Outcomes must not depend on
  // intra-phase delivery order, only transcripts do.
  void shuffle_pending(SeedStream& rng);

  const Transcript& transcript() const { return transcript_; }

 private:
  struct Delivery {
    int true_origin;
    int destination;
    Message msg;
  };

  TranscriptEvent make_event(const Delivery& d, TapAction action);
  void enqueue_injections(std::vector<Injection>&& injections);

  int n_;
  std::deque<Delivery> pending_;
  std::optional<int> tap_victim_;
  TapHandler tap_;
  Transcript transcript_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t defer_streak_ = 0;
};

/**
 * Hooks that let an adversary act between protocol phases. The default
 * implementation does nothing, which yields an honest run.
 */
class Driver {
 public:
  virtual ~Driver() = default;
  virtual void after_round1(Network& net, const std::vector<PartyState>& parties);
  virtual void after_round2(Network& net, const std::vector<PartyState>& parties);
};

/**
 * Drives all parties through round 1, round 2, and key computation over
 * the network, draining deliveries between phases. parties[i] is party
 * i+1 and is advanced in place; rngs supplies each party's substream.
 * Throws StuckRunError naming the blocked party and its missing inputs if
 * anyone cannot advance once the queue is empty.
 */
std::vector<GroupElement> run_to_quiescence(Network& net, std::vector<PartyState>& parties,
                                            std::vector<SeedStream>& rngs, Driver* driver);

}  // namespace bdkex
