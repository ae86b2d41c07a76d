#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bdkex/errors.hpp"
#include "bdkex/scenario.hpp"

namespace {

int run_scenario(const bdkex::ScenarioConfig& config) {
  bdkex::RunOutcome outcome = bdkex::execute_scenario(config);
  if (!config.out.empty()) {
    std::ofstream f(config.out, std::ios::binary);
    if (!f) {
      std::cerr << "bdkex: cannot write " << config.out << "\n";
      return 2;
    }
    f << outcome.transcript_text;
  }
  std::cout << bdkex::report_to_json(outcome.report) << "\n";

  bool ok = outcome.report.agreement;
  if (config.mode == bdkex::Mode::Attack && config.evasion && outcome.report.victim_detects) {
    ok = ok && !*outcome.report.victim_detects;
  }
  return ok ? 0 : 1;
}

int run_replay(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "bdkex: cannot read " << path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  bdkex::ReplayResult result = bdkex::replay_transcript_text(buf.str());
  if (result.match) {
    std::cout << "replay ok: transcript matches\n";
    return 0;
  }
  std::cerr << "replay mismatch: " << result.detail << "\n";
  return 4;
}

int run_sweep(const std::string& spec, const std::string& group) {
  int n_min = 0;
  int n_max = 0;
  int seeds = 0;
  char extra = 0;
  if (std::sscanf(spec.c_str(), "%d:%d:%d%c", &n_min, &n_max, &seeds, &extra) != 3) {
    throw bdkex::ConfigError("sweep format is nmin:nmax:seeds");
  }
  bdkex::SweepResult result = bdkex::sweep(n_min, n_max, seeds, group);
  std::cout << result.table;
  return result.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Burmester-Desmedt group key exchange simulator"};

  std::string mode = "honest";
  int n = 0;
  int victim = 0;
  std::string group = "toy";
  std::uint64_t seed = 0;
  bool check_product = false;
  bool no_evasion = false;
  std::string out;
  std::string replay_path;
  std::string sweep_spec;

  app.add_option("--mode", mode, "honest or attack")
      ->check(CLI::IsMember({"honest", "attack"}));
  app.add_option("--n", n, "party count, at least 3");
  app.add_option("--victim", victim, "index of the attacked party (attack mode)");
  app.add_option("--group", group, "toy, schnorr-256, or file:<path>");
  app.add_option("--seed", seed, "64-bit run seed");
  app.add_flag("--check-product", check_product, "victim verifies that its round-2 values multiply to 1");
  app.add_flag("--no-evasion", no_evasion, "forge a random X_{k-1} instead of the evading value");
  app.add_option("--out", out, "write the run transcript to this path");
  app.add_option("--replay", replay_path, "re-execute a transcript and verify it byte-for-byte");
  app.add_option("--sweep", sweep_spec, "run a pass/fail matrix, format nmin:nmax:seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!replay_path.empty()) {
      return run_replay(replay_path);
    }
    if (!sweep_spec.empty()) {
      return run_sweep(sweep_spec, group);
    }
    bdkex::ScenarioConfig config;
    config.mode = bdkex::mode_from_name(mode);
    config.n = n;
    config.victim = victim;
    config.group = group;
    config.seed = seed;
    config.check_product = check_product;
    config.evasion = !no_evasion;
    config.out = out;
    return run_scenario(config);
  } catch (const bdkex::StuckRunError& e) {
    std::cerr << "bdkex: stuck run: " << e.what() << "\n";
    return 3;
  } catch (const bdkex::Error& e) {
    std::cerr << "bdkex: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bdkex: " << e.what() << "\n";
    return 2;
  }
}
