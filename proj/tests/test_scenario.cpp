#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bdkex/errors.hpp"
#include "bdkex/scenario.hpp"

using namespace bdkex;

namespace {

ScenarioConfig attack_config(int n, int victim, std::uint64_t seed) {
  ScenarioConfig c;
  c.mode = Mode::Attack;
  c.n = n;
  c.victim = victim;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("mode names round-trip and reject junk") {
  CHECK_EQ(mode_name(Mode::Honest), "honest");
  CHECK_EQ(mode_name(Mode::Attack), "attack");
  CHECK_EQ(mode_from_name("honest"), Mode::Honest);
  CHECK_EQ(mode_from_name("attack"), Mode::Attack);
  CHECK_THROWS_AS(mode_from_name("passive"), ConfigError);
  CHECK_THROWS_AS(mode_from_name(""), ConfigError);
}

TEST_CASE("config validation") {
  ScenarioConfig c;
  c.n = 2;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.n = 3;
  validate_config(c);  // honest mode ignores the victim field

  auto bad = attack_config(3, 0, 1);
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad.victim = 4;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad.victim = 3;
  validate_config(bad);
}

TEST_CASE("group specs resolve or fail loudly") {
  auto toy = resolve_group("toy", 1);
  CHECK_EQ(toy->p, BigInt(23));
  auto big = resolve_group("schnorr-256", 1);
  CHECK_EQ(bit_length(big->p), 256u);
  // Same seed, same group; different seed, different group.
  CHECK_EQ(resolve_group("schnorr-256", 1)->digest_hex(), big->digest_hex());
  CHECK(resolve_group("schnorr-256", 2)->digest_hex() != big->digest_hex());
  CHECK_THROWS_AS(resolve_group("dh-2048", 1), ConfigError);
  CHECK_THROWS_AS(resolve_group("file:/no/such/file.json", 1), ConfigError);
}

TEST_CASE("a file group spec loads and matches its source") {
  auto toy = toy_group();
  const char* path = "scenario_group_tmp.json";
  {
    std::ofstream out(path);
    out << group_params_to_json(*toy);
  }
  auto loaded = resolve_group(std::string("file:") + path, 9);
  CHECK_EQ(loaded->digest_hex(), toy->digest_hex());
  CHECK_EQ(loaded->p, toy->p);
  CHECK_EQ(loaded->g, toy->g);
  std::remove(path);
}

TEST_CASE("an honest toy run agrees with no interference") {
  ScenarioConfig c;
  c.n = 4;
  c.seed = 7;
  auto outcome = execute_scenario(c);
  CHECK_EQ(outcome.report.mode, "honest");
  CHECK(outcome.report.agreement);
  CHECK_EQ(outcome.report.keys.size(), 4u);
  for (const auto& [actor, key] : outcome.report.keys) {
    CHECK_EQ(key, outcome.report.keys.front().second);
  }
  CHECK(!outcome.report.victim.has_value());
  CHECK(!outcome.report.victim_detects.has_value());
  CHECK_EQ(outcome.report.event_counts.at("delivered"), 24u);
  CHECK_EQ(outcome.report.event_counts.at("dropped"), 0u);
  CHECK_EQ(outcome.report.event_counts.at("replaced"), 0u);
  CHECK_EQ(outcome.report.event_counts.at("injected"), 0u);
  CHECK(!outcome.attacker_key.has_value());
}

TEST_CASE("an attacked run converges on the adversary's key") {
  auto c = attack_config(5, 2, 7);
  auto outcome = execute_scenario(c);
  CHECK_EQ(outcome.report.mode, "attack");
  CHECK_EQ(outcome.report.victim, 2);
  CHECK(outcome.report.agreement);
  REQUIRE_EQ(outcome.report.keys.size(), 6u);
  CHECK_EQ(outcome.report.keys.back().first, "A");
  for (const auto& [actor, key] : outcome.report.keys) {
    CHECK_EQ(key, outcome.report.keys.front().second);
  }
  // No product check requested, so no detection verdict.
  CHECK(!outcome.report.victim_detects.has_value());
  CHECK_EQ(outcome.report.event_counts.at("delivered"), 27u);
  CHECK_EQ(outcome.report.event_counts.at("dropped"), 6u);
  CHECK_EQ(outcome.report.event_counts.at("replaced"), 1u);
  CHECK_EQ(outcome.report.event_counts.at("injected"), 12u);
}

TEST_CASE("the evading forgery passes the victim's product check") {
  auto c = attack_config(5, 2, 7);
  c.check_product = true;
  auto outcome = execute_scenario(c);
  REQUIRE(outcome.report.victim_detects.has_value());
  CHECK(!*outcome.report.victim_detects);
}

TEST_CASE("without evasion detection follows the planted value exactly") {
  int caught = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto c = attack_config(4, 1, seed);
    c.check_product = true;
    c.evasion = false;
    auto outcome = execute_scenario(c);
    REQUIRE(outcome.report.victim_detects.has_value());
    REQUIRE(outcome.forged.has_value());
    // Detection happens exactly when the planted X_{k-1} is not the one
    // value that closes the product.
    bool planted_off = outcome.forged->X.at(4) != outcome.forged->evading_value;
    CHECK_EQ(*outcome.report.victim_detects, planted_off);
    if (planted_off) {
      ++caught;
    }
    // The keys still agree either way.
    CHECK(outcome.report.agreement);
  }
  CHECK(caught >= 15);
}

TEST_CASE("reports survive a JSON round trip") {
  auto c = attack_config(4, 3, 11);
  c.check_product = true;
  auto outcome = execute_scenario(c);
  auto text = report_to_json(outcome.report);
  auto back = report_from_json(text);
  CHECK(back == outcome.report);

  ScenarioConfig h;
  h.n = 3;
  h.seed = 5;
  auto honest = execute_scenario(h);
  CHECK(report_from_json(report_to_json(honest.report)) == honest.report);

  CHECK_THROWS_AS(report_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(report_from_json("{}"), ConfigError);
}

TEST_CASE("the transcript header pins the resolved parameters") {
  ScenarioConfig c;
  c.n = 3;
  c.seed = 2;
  c.group = "schnorr-256";
  auto outcome = execute_scenario(c);
  std::istringstream lines(outcome.transcript_text);
  std::string header;
  REQUIRE(std::getline(lines, header));
  CHECK(header.find("\"type\":\"bdkex-transcript\"") != std::string::npos);
  CHECK(header.find(to_hex(outcome.group->p)) != std::string::npos);
  CHECK(header.find(to_hex(outcome.group->q)) != std::string::npos);
  CHECK(header.find(to_hex(outcome.group->g)) != std::string::npos);
  CHECK(header.find("\"mode\":\"honest\"") != std::string::npos);
}

TEST_CASE("replay accepts a fresh transcript") {
  auto c = attack_config(4, 4, 3);
  auto outcome = execute_scenario(c);
  auto result = replay_transcript_text(outcome.transcript_text);
  CHECK(result.match);
  CHECK(result.detail.empty());
}

TEST_CASE("replay pinpoints a corrupted line") {
  auto c = attack_config(3, 1, 8);
  auto outcome = execute_scenario(c);
  // Flip one payload nibble on the fourth line.
  auto text = outcome.transcript_text;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    pos = text.find('\n', pos) + 1;
  }
  auto payload_at = text.find("\"payload\":\"", pos);
  REQUIRE(payload_at != std::string::npos);
  auto digit_at = payload_at + std::string("\"payload\":\"").size();
  text[digit_at] = text[digit_at] == '0' ? '1' : '0';

  auto result = replay_transcript_text(text);
  CHECK(!result.match);
  CHECK(result.detail.find("line 4") != std::string::npos);
}

TEST_CASE("replay reports a truncated transcript") {
  ScenarioConfig c;
  c.n = 3;
  c.seed = 4;
  auto outcome = execute_scenario(c);
  auto text = outcome.transcript_text;
  auto cut = text.rfind('\n', text.size() - 2);
  auto result = replay_transcript_text(text.substr(0, cut + 1));
  CHECK(!result.match);
  CHECK(!result.detail.empty());
}

TEST_CASE("replay rejects garbage without crashing") {
  auto r1 = replay_transcript_text("");
  CHECK(!r1.match);
  auto r2 = replay_transcript_text("{\"type\":\"something-else\"}\n");
  CHECK(!r2.match);
  auto r3 = replay_transcript_text("not json at all\n");
  CHECK(!r3.match);
  for (const auto* r : {&r1, &r2, &r3}) {
    CHECK(!r->detail.empty());
  }
}

TEST_CASE("identical configs reproduce identical runs") {
  auto c = attack_config(5, 5, 21);
  c.check_product = true;
  auto one = execute_scenario(c);
  auto two = execute_scenario(c);
  CHECK(one.report == two.report);
  CHECK_EQ(one.transcript_text, two.transcript_text);

  c.seed = 22;
  auto three = execute_scenario(c);
  CHECK(one.transcript_text != three.transcript_text);
}

TEST_CASE("a small sweep passes across modes, sizes, and victims") {
  auto result = sweep(3, 4, 2, "toy");
  CHECK(result.all_passed);
  CHECK(result.table.find("mode=honest") != std::string::npos);
  CHECK(result.table.find("mode=attack") != std::string::npos);
  CHECK(result.table.find("sweep: PASS") != std::string::npos);
}

TEST_CASE("sweep bounds are validated") {
  CHECK_THROWS_AS(sweep(2, 4, 1, "toy"), ConfigError);
  CHECK_THROWS_AS(sweep(5, 4, 1, "toy"), ConfigError);
  CHECK_THROWS_AS(sweep(3, 3, 0, "toy"), ConfigError);
}
