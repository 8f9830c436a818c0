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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdm/error.hpp"
#include "sdm/fixtures.hpp"
#include "sdm/matching.hpp"
#include "sdm/persistence.hpp"
#include "support/generators.hpp"

namespace sdm {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sdm_persistence_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kInvalidArgument;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

TEST(RoundTrip, GeneratedScenariosAndCategories) {
  testing::Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const auto s = testing::random_scenario(rng, "rt" + std::to_string(i));
    const auto text = serialize(s);
    const auto doc = parse_document(text);
    ASSERT_EQ(doc.kind, "scenario");
    ASSERT_EQ(*doc.scenario, s) << text;
    ASSERT_EQ(serialize(*doc.scenario), text);

    const auto c = testing::random_category(rng, "rt" + std::to_string(i));
    const auto ctext = serialize(c);
    const auto cdoc = parse_document(ctext);
    ASSERT_EQ(cdoc.kind, "scenario_category");
    ASSERT_EQ(*cdoc.category, c) << ctext;
    ASSERT_EQ(serialize(*cdoc.category), ctext);
  }
}

TEST(RoundTrip, TagTrees) {
  const auto& trees = default_tag_registry().trees();
  const auto text = serialize(trees);
  const auto doc = parse_document(text);
  EXPECT_EQ(doc.kind, "tag_trees");
  EXPECT_EQ(serialize(doc.tag_trees), text);
}

TEST(RoundTrip, BundledFixtures) {
  auto lib = bundled_fixtures();
  EXPECT_EQ(*std::get<ScenarioPtr>(lib.element("pedestrian crossing scenario")),
            *fixtures::quantitative_scenario());
  EXPECT_EQ(*std::get<ScenarioPtr>(lib.element("pedestrian crossing test")),
            *fixtures::test_scenario());
  EXPECT_EQ(*std::get<ScenarioPtr>(lib.element("pedestrian crossing test speed-up")),
            *fixtures::test_scenario_speed_up());
  EXPECT_EQ(*std::get<ScenarioCategoryPtr>(lib.element("pedestrian crossing category")),
            *fixtures::pedestrian_crossing_category());
  EXPECT_EQ(*std::get<ScenarioCategoryPtr>(lib.element("pedestrian crossing test category")),
            *fixtures::test_category());
  EXPECT_EQ(lib.scenarios().size(), 3u);
  EXPECT_EQ(lib.categories().size(), 2u);
}

TEST(Serialize, SharedActivityWrittenOnce) {
  Scenario s = *fixtures::quantitative_scenario();
  auto other = std::make_shared<Actor>(*s.actors[1]);
  other->uid = "second pedestrian";
  other->initial_state = {{"x_ped_2", {3.0, "m"}}, {"y_ped_2", {-6.0, "m"}}};
  s.actors.push_back(other);
  s.acts.push_back({other, s.activities[3]});
  const auto text = serialize(s);
  EXPECT_EQ(count(text, "\"uid\": \"pedestrian walking\""), 1u);
  EXPECT_EQ(count(text, "\"$ref\": \"pedestrian walking\""), 3u);
  const auto back = parse_document(text).scenario;
  EXPECT_EQ(back->acts[3].activity.get(), back->acts[4].activity.get());
}

TEST(Serialize, LoadedQuantitativeParameters) {
  const auto doc = load(fs::path(SDM_FIXTURE_DIR) / fixtures::kQuantitativeFile);
  ASSERT_EQ(doc.kind, "scenario");
  const auto& braking = *doc.scenario->activities[0];
  EXPECT_EQ(braking.uid, "ego braking");
  EXPECT_EQ(braking.parameters,
            (std::map<std::string, double>{{"A", -8.0}, {"T", 4.0}, {"t0", 0.0}, {"z0", 8.0}}));
  EXPECT_EQ(doc.scenario->actors[0]->initial_state.at("x_ego").value, -20.0);
}

TEST(Library, CrossFileResolutionSharesInstances) {
  auto lib = Library::open(SDM_FIXTURE_DIR);
  const auto& test = lib.load_file(fixtures::kTestFile);
  const auto& quant = lib.load_file(fixtures::kQuantitativeFile);
  EXPECT_EQ(test.scenario->start_event.get(), quant.scenario->start_event.get());
  EXPECT_EQ(test.scenario->actors[0]->category.get(), quant.scenario->actors[0]->category.get());
  EXPECT_EQ(lib.locate("walking straight"), std::string(fixtures::kCategoryFile));
  EXPECT_FALSE(lib.locate("nothing here"));
}

TEST(Library, QualitativeUidsAreImportedNotRedefined) {
  const auto text = slurp(fs::path(SDM_FIXTURE_DIR) / fixtures::kTestFile);
  for (const char* uid : {"ego qualitative", "pedestrian qualitative", "walking straight"}) {
    EXPECT_EQ(count(text, std::string("\"uid\": \"") + uid + "\""), 0u) << uid;
  }
  EXPECT_GT(count(text, "\"$ref\": \"pedestrian qualitative\""), 0u);
  const auto speed = slurp(fs::path(SDM_FIXTURE_DIR) / fixtures::kSpeedUpFile);
  EXPECT_EQ(count(speed, "\"uid\": \"pedestrian starts walking\""), 0u);
  EXPECT_NE(speed.find(fixtures::kTestFile), std::string::npos);
}

// A missing imported file is an I/O failure naming the file.
TEST(Library, MissingImportedFile) {
  auto files = embedded_fixture_files();
  files.erase(fixtures::kQuantitativeFile);
  files.erase("index.scn.json");
  auto lib = Library::from_memory(files);
  try {
    lib.load_file(fixtures::kTestFile);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIOFailure) << e.what();
    EXPECT_NE(std::string(e.what()).find(fixtures::kQuantitativeFile), std::string::npos);
  }
}

TEST(Library, MissingRefNamesUid) {
  Scenario s = *fixtures::quantitative_scenario();
  auto text = serialize(s);
  const std::string from = "\"$ref\": \"ego stopped\"";
  text.replace(text.find(from), from.size(), "\"$ref\": \"nowhere to be found\"");
  try {
    parse_document(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUnresolvedReference);
    EXPECT_NE(std::string(e.what()).find("nowhere to be found"), std::string::npos);
  }
}

TEST(Library, DuplicateUidOnSave) {
  const auto dir = temp_dir("dup");
  write_fixtures(dir);
  auto lib = Library::open(dir);
  Scenario s = *fixtures::quantitative_scenario();
  auto ped = std::make_shared<Actor>(*s.actors[1]);
  ped->initial_state["y_ped"].value = -7.0;
  s.actors[1] = ped;
  for (auto& act : s.acts) {
    if (act.actor->uid == ped->uid) act.actor = ped;
  }
  s.uid = "another scenario";
  EXPECT_EQ(code_of([&] { save(s, dir / "another.scn.json", &lib); }), Errc::kDuplicateUid);
  EXPECT_FALSE(fs::exists(dir / "another.scn.json"));
  fs::remove_all(dir);
}

TEST(ParseErrors, LineAndColumn) {
  try {
    parse_document("{\n  \"kind\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), Errc::kParseError);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(ParseErrors, VersionMismatch) {
  auto text = serialize(*fixtures::quantitative_scenario());
  const std::string from = "\"format_version\": \"1.0.0\"";
  text.replace(text.find(from), from.size(), "\"format_version\": \"2.0.0\"");
  EXPECT_EQ(code_of([&] { parse_document(text); }), Errc::kVersionMismatch);
}

TEST(ParseErrors, UnknownFieldRejected) {
  auto text = serialize(*fixtures::quantitative_scenario());
  const std::string from = "\"class\": \"Scenario\",";
  text.replace(text.find(from), from.size(), from + " \"colour\": \"red\",");
  EXPECT_EQ(code_of([&] { parse_document(text); }), Errc::kParseError);
}

TEST(ParseErrors, InvalidContentFailsValidation) {
  auto text = serialize(*fixtures::quantitative_scenario());
  const std::string from = "\"Ego vehicle\"";
  text.replace(text.find(from), from.size(), "\"Cruising\"");
  EXPECT_EQ(code_of([&] { parse_document(text); }), Errc::kValidationFailed);
}

TEST(Fixtures, RegeneratedBytesMatchEmbeddedAndShipped) {
  const auto dir = temp_dir("regen");
  write_fixtures(dir);
  const auto& embedded = embedded_fixture_files();
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    const auto bytes = slurp(entry.path());
    ASSERT_TRUE(embedded.count(name)) << name;
    EXPECT_EQ(bytes, embedded.at(name)) << name;
    EXPECT_EQ(bytes, slurp(fs::path(SDM_FIXTURE_DIR) / name)) << name;
    ++n;
  }
  EXPECT_EQ(n, embedded.size());
  EXPECT_EQ(n, 7u);
  fs::remove_all(dir);
}

TEST(Fixtures, IndexListsEveryUid) {
  auto lib = Library::open(SDM_FIXTURE_DIR);
  EXPECT_EQ(lib.index(), lib.build_index());
  EXPECT_EQ(lib.index().at("ego braking"), fixtures::kQuantitativeFile);
  const auto doc = load(fs::path(SDM_FIXTURE_DIR) / kIndexFile);
  EXPECT_EQ(doc.kind, "library_index");
}

TEST(Fixtures, BundledCategoryComprisesBundledScenario) {
  auto lib = bundled_fixtures();
  const auto category =
      std::get<ScenarioCategoryPtr>(lib.element("pedestrian crossing category"));
  const auto scenario =
      std::get<ScenarioPtr>(lib.element("pedestrian crossing scenario"));
  EXPECT_TRUE(comprises(*category, *scenario, lib.registries()));
}

TEST(Io, MissingFile) {
  EXPECT_EQ(code_of([] { load("/nonexistent/dir/file.scn.json"); }), Errc::kIOFailure);
}

}  // namespace
}  // namespace sdm
