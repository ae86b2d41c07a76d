#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdkex/attack.hpp"

namespace bdkex {

enum class Mode { Honest, Attack };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

/**
 * Everything that determines a run. `group` is one of "toy",
 * "schnorr-256", or "file:<path>"; combined with `seed` it pins the
 * parameters exactly, so two runs with equal configs are byte-identical.
 * `victim` and `evasion` only matter in attack mode; `out`, when
 * non-empty, is where the CLI writes the transcript.
 */
struct ScenarioConfig {
  Mode mode = Mode::Honest;
  int n = 0;
  int victim = 0;
  std::string group = "toy";
  std::uint64_t seed = 0;
  bool check_product = false;
  bool evasion = true;
  std::string out;
};

// Throws ConfigError on n < 3 or, in attack mode, victim outside [1, n].
void validate_config(const ScenarioConfig& config);

// Materializes a group spec string. "schnorr-256" generates from the
// run's group-generation substream, so the same seed yields the same
// parameters.
GroupPtr resolve_group(const std::string& spec, std::uint64_t seed);

/**
 * Machine-readable outcome of one run. `keys` lists every actor's key in
 * report order (parties "1".."n", then "A" for the adversary in attack
 * mode); `agreement` says whether all of them are byte-equal.
 * `victim_detects` is present when the victim ran the product check and
 * is true when that check failed.
 */
struct RunReport {
  std::string mode;
  int n = 0;
  std::optional<int> victim;
  std::string group_digest;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> keys;
  bool agreement = false;
  std::optional<bool> victim_detects;
  std::map<std::string, std::uint64_t> event_counts;

  bool operator==(const RunReport&) const = default;
};

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

/**
 * A finished run: the report plus the internal state tests and tools
 * inspect. parties[i] is party i+1 after key computation; keys holds the
 * party keys in the same order. The attacker fields are populated in
 * attack mode only. transcript_text is the full replayable log (header
 * line plus one line per network event).
 */
struct RunOutcome {
  RunReport report;
  GroupPtr group;
  std::vector<PartyState> parties;
  std::vector<GroupElement> keys;
  std::optional<Scalar> attacker_a;
  std::optional<GroupElement> attacker_key;
  std::optional<ForgedList> forged;
  std::string transcript_text;
};

// Runs one scenario. group_override substitutes pre-resolved parameters
// (replay uses the ones embedded in the transcript); when null the
// config's group spec is resolved.
RunOutcome execute_scenario(const ScenarioConfig& config, GroupPtr group_override = nullptr);

// Header line (embedded config and resolved group) followed by the
// event log, one JSON object per line.
std::string render_transcript(const ScenarioConfig& config, const GroupParams& group,
                              const Transcript& transcript);

struct ReplayResult {
  bool match = false;
  std::string detail;
};

// Re-executes the scenario embedded in a transcript and byte-compares
// the regenerated log against the original. detail names the first
// divergent line on mismatch.
ReplayResult replay_transcript_text(const std::string& text);

struct SweepResult {
  bool all_passed = false;
  std::string table;
};

/**
 * Cross product of n in [n_min, n_max], seeds 1..seed_count, and both
 * modes on one group spec. Honest cells must agree; attack cells run
 * every victim position with evasion and the product check on, and must
 * agree without detection. Returns a printable pass/fail matrix.
 */
SweepResult sweep(int n_min, int n_max, int seed_count, const std::string& group_spec);

}  // namespace bdkex
