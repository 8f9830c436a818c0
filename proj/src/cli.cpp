/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "sdm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>

#include "CLI11.hpp"
#include "sdm/matching.hpp"
#include "sdm/persistence.hpp"
#include "sdm/policies.hpp"
#include "sdm/simulation.hpp"

namespace sdm {
namespace {

namespace fs = std::filesystem;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::kIOFailure:
    case Errc::kParseError:
    case Errc::kUnresolvedReference:
    case Errc::kVersionMismatch:
    case Errc::kUnknownTag:
    case Errc::kAmbiguousTag:
      return kExitIO;
    case Errc::kSyntaxError:  // only the --tags expression is parsed raw
      return kExitUsage;
    default:
      return kExitDomainFailure;
  }
}

/// A library for `file`: the given root, or the file's own directory.
Library library_for(const std::string& file, const std::string& root) {
  if (!root.empty()) return Library::open(root);
  const fs::path parent = fs::path(file).parent_path();
  return Library::open(parent.empty() ? fs::path(".") : parent);
}

Document load_checked(const std::string& file, Library& library) {
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) {
    throw Error(Errc::kIOFailure, "cannot read " + file);
  }
  return load(file, &library);
}

bool drives_ego_by_policy(const Scenario& scenario, const Registries& reg) {
  std::set<std::string> acting;
  for (const auto& act : scenario.acts) {
    if (act.actor) acting.insert(act.actor->uid);
  }
  const Tag ego = reg.tags->resolve(kEgoVehicleTag);
  for (const auto& actor : scenario.actors) {
    const auto tags = resolved_tags(*reg.tags, actor->tags,
                                    actor->category ? &actor->category->tags : nullptr);
    if (tags.count(ego) && !acting.count(actor->uid)) return true;
  }
  return false;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIOFailure, "cannot write " + path);
  fn(out);
  out.close();
  if (!out) throw Error(Errc::kIOFailure, "cannot write " + path);
}

std::string mint_uid(std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> byte(0, 255);
  unsigned char b[16];
  for (auto& x : b) x = static_cast<unsigned char>(byte(rng));
  b[6] = static_cast<unsigned char>((b[6] & 0x0f) | 0x40);  // version 4
  b[8] = static_cast<unsigned char>((b[8] & 0x3f) | 0x80);  // RFC 4122 variant
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 16; ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out += '-';
    out += kHex[b[i] >> 4];
    out += kHex[b[i] & 0x0f];
  }
  return out;
}

struct Options {
  std::string file;
  std::string library;
  std::string out;
  std::string events;
  std::string category;
  std::string scenario;
  std::string tags;
  std::string policy;
  std::string policy_args;
  double dt = SimConfig{}.dt;
  double t_max = SimConfig{}.t_max;
  int count = 1;
  std::optional<std::uint64_t> seed;
};

int cmd_validate(const Options& o, std::ostream& out) {
  Library library = library_for(o.file, o.library);
  try {
    const Document doc = load_checked(o.file, library);
    out << "ok: " << doc.kind << "\n";
    return kExitOk;
  } catch (const ValidationFailed& failed) {
    out << failed.report().to_string();
    return kExitDomainFailure;
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  Library library = library_for(o.file, o.library);
  const Document doc = load_checked(o.file, library);
  if (doc.kind != "scenario") {
    throw Usage(o.file + " holds a " + doc.kind + ", not a scenario");
  }
  SimConfig config;
  config.dt = o.dt;
  config.t_max = o.t_max;
  const Registries reg = library.registries();
  Trace trace;
  if (drives_ego_by_policy(*doc.scenario, reg)) {
    std::shared_ptr<const EgoPolicy> policy;
    try {
      policy = make_policy(o.policy.empty() ? "constant-speed" : o.policy,
                           parse_policy_args(o.policy_args));
    } catch (const Error& e) {
      throw Usage(std::string("--policy-args: ") + e.what());
    }
    trace = run_test_scenario(*doc.scenario, policy, config, reg);
  } else {
    if (!o.policy.empty() || !o.policy_args.empty()) {
      throw Usage("--policy applies only to scenarios whose ego vehicle has no acts");
    }
    trace = simulate(*doc.scenario, config, {}, reg);
  }
  write_file(o.out, [&](std::ostream& s) { write_trace_csv(trace, s); });
  if (!o.events.empty()) {
    write_file(o.events, [&](std::ostream& s) { write_events_csv(trace, s); });
  }
  out << "outcome:";
  for (std::size_t i = 0; i < trace.outcome.size(); ++i) {
    out << (i ? ", " : " ") << trace.outcome[i];
  }
  out << "\n";
  out << "end: t=" << format_double(trace.samples.back().t)
      << (trace.ended ? "" : " (t_max reached)") << "\n";
  return kExitOk;
}

int cmd_match(const Options& o, std::ostream& out) {
  Library category_lib = library_for(o.category, o.library);
  const Document category = load_checked(o.category, category_lib);
  if (category.kind != "scenario_category") {
    throw Usage(o.category + " holds a " + category.kind + ", not a scenario category");
  }
  const bool shared =
      !o.library.empty() || fs::path(o.category).parent_path().lexically_normal() ==
                                fs::path(o.scenario).parent_path().lexically_normal();
  std::optional<Library> own;
  if (!shared) own.emplace(library_for(o.scenario, ""));
  Library& scenario_lib = shared ? category_lib : *own;
  const Document scenario = load_checked(o.scenario, scenario_lib);
  if (scenario.kind != "scenario") {
    throw Usage(o.scenario + " holds a " + scenario.kind + ", not a scenario");
  }
  const bool result = comprises(*category.category, *scenario.scenario,
                                category_lib.registries());
  out << "comprises: " << (result ? "true" : "false") << "\n";
  return result ? kExitOk : kExitDomainFailure;
}

int cmd_query(const Options& o, std::ostream& out) {
  Library library = Library::open(o.library);
  const auto scenarios = library.scenarios();
  for (const auto& s : select(scenarios, o.tags, library.registries())) {
    out << s->uid << "\n";
  }
  return kExitOk;
}

int cmd_index(const Options& o, std::ostream& out) {
  write_index(o.library);
  out << "entries: " << Library::open(o.library).index().size() << "\n";
  return kExitOk;
}

int cmd_fixtures(const Options& o, std::ostream& out) {
  write_fixtures(o.out);
  out << "wrote " << Library::open(o.out).files().size() + 1 << " files to "
      << o.out << "\n";
  return kExitOk;
}

int cmd_mint_uid(const Options& o, std::ostream& out) {
  std::mt19937_64 rng(o.seed ? *o.seed : std::random_device{}());
  for (int i = 0; i < o.count; ++i) out << mint_uid(rng) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Scenario description and simulation tool", "sdm"};
  app.require_subcommand(1, 1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Load a file and report violations");
  validate_cmd->add_option("--file", o.file, "Scenario or category file")->required();
  validate_cmd->add_option("--library", o.library, "Library root for references");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write traces");
  simulate_cmd->add_option("--file", o.file, "Scenario file")->required();
  simulate_cmd->add_option("--out", o.out, "Trace CSV")->required();
  simulate_cmd->add_option("--events", o.events, "Event log CSV");
  simulate_cmd->add_option("--dt", o.dt, "Step size in s")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--t-max", o.t_max, "Time limit in s")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--policy", o.policy, "Ego policy for test scenarios")
      ->check(CLI::IsMember({"constant-speed", "demo-aeb"}));
  simulate_cmd->add_option("--policy-args", o.policy_args, "Policy parameters k=v,...");
  simulate_cmd->add_option("--library", o.library, "Library root for references");

  auto* match_cmd = app.add_subcommand("match", "Check whether a category comprises a scenario");
  match_cmd->add_option("--category", o.category, "Scenario category file")->required();
  match_cmd->add_option("--scenario", o.scenario, "Scenario file")->required();
  match_cmd->add_option("--library", o.library, "Library root for references");

  auto* query_cmd = app.add_subcommand("query", "List scenarios whose tags match");
  query_cmd->add_option("--library", o.library, "Library root")->required();
  query_cmd->add_option("--tags", o.tags, "Tag expression with AND, OR, NOT")->required();

  auto* index_cmd = app.add_subcommand("index", "Rebuild index.scn.json of a library");
  index_cmd->add_option("--library", o.library, "Library root")->required();

  auto* fixtures_cmd = app.add_subcommand("fixtures", "Write the bundled example files");
  fixtures_cmd->add_option("--out", o.out, "Output directory")->required();

  auto* mint_cmd = app.add_subcommand("mint-uid", "Print random UUID-shaped uids");
  mint_cmd->add_option("--count", o.count, "Number of uids")->check(CLI::PositiveNumber);
  mint_cmd->add_option("--seed", o.seed, "Seed for reproducible output");

  std::vector<const char*> argv{"sdm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*simulate_cmd) return cmd_simulate(o, out);
    if (*match_cmd) return cmd_match(o, out);
    if (*query_cmd) return cmd_query(o, out);
    if (*index_cmd) return cmd_index(o, out);
    if (*fixtures_cmd) return cmd_fixtures(o, out);
    if (*mint_cmd) return cmd_mint_uid(o, out);
  } catch (const Usage& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationFailed& e) {
    err << "error: validation failed\n" << e.report().to_string();
    return kExitDomainFailure;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIO;
  }
  return kExitUsage;
}

}  // namespace sdm
