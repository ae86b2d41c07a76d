#include "bdkex/scenario.hpp"

#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bdkex/errors.hpp"

namespace bdkex {

std::string mode_name(Mode m) { return m == Mode::Honest ? "honest" : "attack"; }

Mode mode_from_name(const std::string& name) {
  if (name == "honest") {
    return Mode::Honest;
  }
  if (name == "attack") {
    return Mode::Attack;
  }
  throw ConfigError("unknown mode \"" + name + "\" (expected honest or attack)");
}

void validate_config(const ScenarioConfig& config) {
  if (config.n < 3) {
    throw ConfigError("party count must be >= 3");
  }
  if (config.mode == Mode::Attack && (config.victim < 1 || config.victim > config.n)) {
    throw ConfigError("attack mode needs a victim index in [1, n]");
  }
}

GroupPtr resolve_group(const std::string& spec, std::uint64_t seed) {
  if (spec == "toy") {
    return toy_group();
  }
  if (spec == "schnorr-256") {
    SeedStream rng(seed, SeedStream::kGroupGenActor);
    return schnorr_group(256, rng);
  }
  if (spec.rfind("file:", 0) == 0) {
    return load_group_file(spec.substr(5));
  }
  throw ConfigError("unknown group \"" + spec + "\" (expected toy, schnorr-256, or file:<path>)");
}

std::string report_to_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["mode"] = report.mode;
  j["n"] = report.n;
  if (report.victim) {
    j["victim"] = *report.victim;
  }
  j["group_digest"] = report.group_digest;
  j["seed"] = report.seed;
  nlohmann::ordered_json keys = nlohmann::ordered_json::object();
  for (const auto& [actor, hex] : report.keys) {
    keys[actor] = hex;
  }
  j["keys"] = keys;
  j["agreement"] = report.agreement;
  if (report.victim_detects) {
    j["victim_detects"] = *report.victim_detects;
  }
  nlohmann::ordered_json events = nlohmann::ordered_json::object();
  for (const char* name : {"delivered", "dropped", "replaced", "injected"}) {
    auto it = report.event_counts.find(name);
    events[name] = it == report.event_counts.end() ? 0 : it->second;
  }
  j["events"] = events;
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    RunReport report;
    report.mode = j.at("mode").get<std::string>();
    report.n = j.at("n").get<int>();
    if (j.contains("victim")) {
      report.victim = j.at("victim").get<int>();
    }
    report.group_digest = j.at("group_digest").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [actor, hex] : j.at("keys").items()) {
      report.keys.emplace_back(actor, hex.get<std::string>());
    }
    report.agreement = j.at("agreement").get<bool>();
    if (j.contains("victim_detects")) {
      report.victim_detects = j.at("victim_detects").get<bool>();
    }
    for (const auto& [name, count] : j.at("events").items()) {
      report.event_counts[name] = count.get<std::uint64_t>();
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report is missing fields: ") + e.what());
  }
}

std::string render_transcript(const ScenarioConfig& config, const GroupParams& group,
                              const Transcript& transcript) {
  nlohmann::ordered_json header;
  header["type"] = "bdkex-transcript";
  header["version"] = 1;
  nlohmann::ordered_json c;
  c["mode"] = mode_name(config.mode);
  c["n"] = config.n;
  if (config.mode == Mode::Attack) {
    c["victim"] = config.victim;
  }
  c["group"] = config.group;
  c["seed"] = config.seed;
  c["check_product"] = config.check_product;
  c["evasion"] = config.evasion;
  header["config"] = c;
  nlohmann::ordered_json g;
  g["p"] = to_hex(group.p);
  g["q"] = to_hex(group.q);
  g["g"] = to_hex(group.g);
  header["group"] = g;
  return header.dump() + "\n" + transcript.to_jsonl();
}

RunOutcome execute_scenario(const ScenarioConfig& config, GroupPtr group_override) {
  validate_config(config);
  GroupPtr group = group_override ? std::move(group_override)
                                  : resolve_group(config.group, config.seed);

  Network net(config.n);
  std::vector<PartyState> parties;
  std::vector<SeedStream> rngs;
  parties.reserve(static_cast<std::size_t>(config.n));
  rngs.reserve(static_cast<std::size_t>(config.n));
  for (int i = 1; i <= config.n; ++i) {
    parties.emplace_back(group, i, config.n);
    rngs.emplace_back(config.seed, static_cast<std::uint32_t>(i));
  }

  std::unique_ptr<Attacker> attacker;
  if (config.mode == Mode::Attack) {
    attacker = std::make_unique<Attacker>(group, config.n, config.victim, config.seed);
    attacker->set_evasion(config.evasion);
    net.install_tap(config.victim, attacker->handler());
  }

  RunOutcome outcome;
  outcome.group = group;
  outcome.keys = run_to_quiescence(net, parties, rngs, attacker.get());

  RunReport& report = outcome.report;
  report.mode = mode_name(config.mode);
  report.n = config.n;
  report.group_digest = group->digest_hex();
  report.seed = config.seed;
  for (int i = 1; i <= config.n; ++i) {
    report.keys.emplace_back(std::to_string(i),
                             outcome.keys[static_cast<std::size_t>(i - 1)].hex());
  }
  if (attacker) {
    report.victim = config.victim;
    report.keys.emplace_back("A", attacker->key()->hex());
    outcome.attacker_a = attacker->a();
    outcome.attacker_key = attacker->key();
    outcome.forged = attacker->forged();
    if (config.check_product) {
      const PartyState& victim = parties[static_cast<std::size_t>(config.victim - 1)];
      report.victim_detects = !product_check(victim.x_view());
    }
  }
  report.agreement = true;
  for (const auto& [actor, hex] : report.keys) {
    (void)actor;
    report.agreement = report.agreement && hex == report.keys.front().second;
  }
  for (TapAction a :
       {TapAction::Delivered, TapAction::Dropped, TapAction::Replaced, TapAction::Injected}) {
    report.event_counts[tap_action_name(a)] = net.transcript().count(a);
  }

  outcome.parties = std::move(parties);
  outcome.transcript_text = render_transcript(config, *group, net.transcript());
  return outcome;
}

namespace {

struct ParsedHeader {
  ScenarioConfig config;
  GroupPtr group;
};

ParsedHeader parse_header(const std::string& line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("transcript header is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("type").get<std::string>() != "bdkex-transcript") {
      throw ConfigError("not a bdkex transcript");
    }
    if (j.at("version").get<int>() != 1) {
      throw ConfigError("unsupported transcript version");
    }
    const auto& c = j.at("config");
    ParsedHeader parsed;
    parsed.config.mode = mode_from_name(c.at("mode").get<std::string>());
    parsed.config.n = c.at("n").get<int>();
    if (c.contains("victim")) {
      parsed.config.victim = c.at("victim").get<int>();
    }
    parsed.config.group = c.at("group").get<std::string>();
    parsed.config.seed = c.at("seed").get<std::uint64_t>();
    parsed.config.check_product = c.at("check_product").get<bool>();
    parsed.config.evasion = c.at("evasion").get<bool>();
    const auto& g = j.at("group");
    parsed.group = make_group_params(from_hex(g.at("p").get<std::string>()),
                                     from_hex(g.at("q").get<std::string>()),
                                     from_hex(g.at("g").get<std::string>()));
    return parsed;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("transcript header is missing fields: ") + e.what());
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string::size_type pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

ReplayResult replay_transcript_text(const std::string& text) {
  auto nl = text.find('\n');
  if (nl == std::string::npos) {
    return {false, "transcript has no header line"};
  }

  RunOutcome outcome;
  try {
    ParsedHeader parsed = parse_header(text.substr(0, nl));
    outcome = execute_scenario(parsed.config, parsed.group);
  } catch (const Error& e) {
    return {false, std::string("replay could not re-execute: ") + e.what()};
  }

  if (outcome.transcript_text == text) {
    return {true, {}};
  }

  auto recorded = split_lines(text);
  auto replayed = split_lines(outcome.transcript_text);
  std::size_t limit = std::min(recorded.size(), replayed.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (recorded[i] != replayed[i]) {
      std::ostringstream os;
      os << "transcript diverges at line " << (i + 1) << ": recorded " << recorded[i]
         << " but replay produced " << replayed[i];
      return {false, os.str()};
    }
  }
  std::ostringstream os;
  os << "transcript length mismatch: recorded " << recorded.size() << " lines, replay produced "
     << replayed.size();
  return {false, os.str()};
}

SweepResult sweep(int n_min, int n_max, int seed_count, const std::string& group_spec) {
  if (n_min < 3 || n_max < n_min) {
    throw ConfigError("sweep needs 3 <= n_min <= n_max");
  }
  if (seed_count < 1) {
    throw ConfigError("sweep needs at least one seed");
  }

  std::ostringstream table;
  bool all_passed = true;
  for (int n = n_min; n <= n_max; ++n) {
    for (Mode mode : {Mode::Honest, Mode::Attack}) {
      int total = 0;
      int passed = 0;
      for (int seed = 1; seed <= seed_count; ++seed) {
        const int victim_hi = mode == Mode::Attack ? n : 1;
        for (int victim = 1; victim <= victim_hi; ++victim) {
          ScenarioConfig config;
          config.mode = mode;
          config.n = n;
          config.victim = mode == Mode::Attack ? victim : 0;
          config.group = group_spec;
          config.seed = static_cast<std::uint64_t>(seed);
          config.check_product = mode == Mode::Attack;
          RunOutcome outcome = execute_scenario(config);
          bool ok = outcome.report.agreement;
          if (outcome.report.victim_detects) {
            ok = ok && !*outcome.report.victim_detects;
          }
          ++total;
          passed += ok ? 1 : 0;
        }
      }
      all_passed = all_passed && passed == total;
      table << "mode=" << mode_name(mode) << " n=" << n;
      if (mode == Mode::Attack) {
        table << " victims=1.." << n;
      }
      table << " seeds=1.." << seed_count << " pass=" << passed << "/" << total << "\n";
    }
  }
  table << "sweep: " << (all_passed ? "PASS" : "FAIL") << "\n";
  return {all_passed, table.str()};
}

}  // namespace bdkex
