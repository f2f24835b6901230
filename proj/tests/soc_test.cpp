// Copyright 2026 The diftsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diftsim/soc.hpp"

#include <gtest/gtest.h>

#include <random>

#include "diftsim_programs.hpp"
#include "test_support.hpp"

namespace {

using namespace diftsim;

ProgramSet demo_programs() {
  return {programs::kSoftwareBlur, programs::kHardwareBlur};
}

ScenarioConfig demo_config(int id, const PatchParams& region,
                           std::optional<PatchParams> attack = std::nullopt) {
  ScenarioConfig cfg = scenario_preset(id);
  cfg.sensitive_region = region;
  cfg.legit_patch = region;
  cfg.attack = attack;
  return cfg;
}

TEST(SocHarness, BuildTagsExactlyTheSensitiveRegion) {
  const Image img = testsup::checkerboard(32, 32);
  const ScenarioConfig cfg = demo_config(1, {8, 24, 8, 24});
  Soc soc = build_soc(cfg, img, demo_programs());

  uint64_t tagged = 0;
  for (uint32_t i = 0; i < 32 * 32; ++i)
    tagged += soc.mem->read(soc.src_addr + i, 1).tag_bits;
  EXPECT_EQ(tagged, 256u);  // 16 x 16 sensitive pixels

  const ScenarioConfig none = demo_config(1, {0, 0, 0, 0});
  Soc soc2 = build_soc(none, img, demo_programs());
  uint64_t tagged2 = 0;
  for (uint32_t i = 0; i < 32 * 32; ++i)
    tagged2 += soc2.mem->read(soc2.src_addr + i, 1).tag_bits;
  EXPECT_EQ(tagged2, 0u);
}

TEST(SocHarness, BuildWritesTheParameterBlock) {
  const Image img = testsup::checkerboard(16, 16);
  const ScenarioConfig cfg = demo_config(1, {4, 12, 4, 12});
  Soc soc = build_soc(cfg, img, demo_programs());
  const uint32_t base = soc_layout::kParamBase;
  EXPECT_EQ(soc.mem->read(base + 0, 4).value, soc.src_addr);
  EXPECT_EQ(soc.mem->read(base + 4, 4).value, soc.dst_addr);
  EXPECT_EQ(soc.mem->read(base + 8, 4).value, 16u);
  EXPECT_EQ(soc.mem->read(base + 12, 4).value, 16u);
  EXPECT_EQ(soc.mem->read(base + 16, 4).value, 4u);
  EXPECT_EQ(soc.mem->read(base + 20, 4).value, 12u);
  EXPECT_EQ(soc.mem->read(base + 16, 4).tag_bits, 0b0000);
}

TEST(SocHarness, OversizedImageIsRejected) {
  const Image img = Image::filled(512, 512, 0);
  EXPECT_THROW(build_soc(demo_config(1, {0, 0, 0, 0}), img, demo_programs()),
               HarnessError);
}

TEST(SocHarness, TagOverheadOfTheDefaultMap) {
  const Image img = testsup::checkerboard(16, 16);
  Soc soc = build_soc(demo_config(1, {0, 8, 0, 8}), img, demo_programs());
  EXPECT_EQ(soc.mem->tag_overhead_ratio(), 0.125);
}

TEST(SocHarness, InjectAttackOverwritesPatchParamsUntagged) {
  const Image img = testsup::checkerboard(16, 16);
  Soc soc = build_soc(demo_config(1, {4, 12, 4, 12}), img, demo_programs());
  inject_attack(soc, {4, 12, 4, 5});
  const uint32_t base = soc_layout::kParamBase;
  EXPECT_EQ(soc.mem->read(base + 16, 4).value, 4u);
  EXPECT_EQ(soc.mem->read(base + 28, 4).value, 5u);
  EXPECT_EQ(soc.mem->read(base + 28, 4).tag_bits, 0b0000);
  // Buffer addresses and geometry are untouched.
  EXPECT_EQ(soc.mem->read(base + 0, 4).value, soc.src_addr);
  EXPECT_EQ(soc.mem->read(base + 8, 4).value, 16u);
}

TEST(SocHarness, CountLeakedPixels) {
  const Image input = testsup::checkerboard(8, 8);
  const PatchParams region{0, 8, 0, 8};
  const Image reference = blur_kernel(input, region);

  EXPECT_EQ(count_leaked_pixels(input, reference.pixels, region, reference), 0u);
  EXPECT_EQ(count_leaked_pixels(input, input.pixels, region, reference), 64u);

  // Partial emission counts only what was emitted.
  std::vector<uint8_t> half(input.pixels.begin(), input.pixels.begin() + 32);
  EXPECT_EQ(count_leaked_pixels(input, half, region, reference), 32u);

  // Pixels the blur would not change never count as leaks.
  const Image flat = Image::filled(8, 8, 9);
  const Image flat_ref = blur_kernel(flat, region);
  EXPECT_EQ(count_leaked_pixels(flat, flat.pixels, region, flat_ref), 0u);
}

// --- full scenario runs on a small image -----------------------------------

constexpr PatchParams kRegion{4, 12, 4, 12};
constexpr PatchParams kShrunk{4, 12, 4, 6};

Image demo_image() { return testsup::checkerboard(16, 16); }

TEST(Scenario, SoftwareCleanRunMatchesOracle) {
  const auto res = run_scenario(demo_config(1, kRegion), demo_image(), demo_programs());
  EXPECT_EQ(res.outcome.last.kind, StepEvent::Kind::halted);
  EXPECT_EQ(res.outcome.last.exit_code, 0u);
  EXPECT_FALSE(res.report.violation);
  EXPECT_EQ(res.report.leaked_pixels, 0u);
  EXPECT_TRUE(res.report.passed);
  EXPECT_EQ(res.emitted, testsup::oracle_blur(demo_image(), kRegion).pixels);
}

TEST(Scenario, HardwareCleanRunMatchesSoftware) {
  const auto sw = run_scenario(demo_config(1, kRegion), demo_image(), demo_programs());
  const auto hw = run_scenario(demo_config(2, kRegion), demo_image(), demo_programs());
  EXPECT_TRUE(hw.report.passed);
  EXPECT_EQ(hw.emitted, sw.emitted);
}

TEST(Scenario, BareAcceleratorUnderAttackLeaks) {
  const auto res =
      run_scenario(demo_config(3, kRegion, kShrunk), demo_image(), demo_programs());
  EXPECT_FALSE(res.report.violation);
  EXPECT_GE(res.report.leaked_pixels, 1u);
  EXPECT_TRUE(res.report.passed);

  // Independent leak oracle: re-run the corrupted blur on the host and diff.
  const Image input = demo_image();
  const Image reference = blur_kernel(input, kRegion);
  const Image corrupted = testsup::oracle_blur(input, kShrunk);
  EXPECT_EQ(res.emitted, corrupted.pixels);
  uint64_t expect_leaked = 0;
  for (uint32_t r = 0; r < input.rows; ++r)
    for (uint32_t c = 0; c < input.cols; ++c)
      if (kRegion.contains(r, c) && corrupted.at(r, c) == input.at(r, c) &&
          reference.at(r, c) != input.at(r, c))
        ++expect_leaked;
  EXPECT_EQ(res.report.leaked_pixels, expect_leaked);
  EXPECT_GT(expect_leaked, 0u);
}

TEST(Scenario, ShelledAcceleratorBlocksTheAttack) {
  const auto res =
      run_scenario(demo_config(4, kRegion, kShrunk), demo_image(), demo_programs());
  EXPECT_TRUE(res.report.violation);
  EXPECT_EQ(res.report.violation_site, "shell");
  EXPECT_EQ(res.report.leaked_pixels, 0u);
  EXPECT_TRUE(res.report.passed);
  EXPECT_TRUE(res.emitted.empty());  // the program refused to emit
  EXPECT_EQ(res.outcome.last.exit_code, 2u);
}

TEST(Scenario, SoftwarePathUnderAttackTrapsAtTheSink) {
  const auto res =
      run_scenario(demo_config(5, kRegion, kShrunk), demo_image(), demo_programs());
  EXPECT_TRUE(res.report.violation);
  EXPECT_EQ(res.report.violation_site, "cpu-sink");
  EXPECT_EQ(res.report.leaked_pixels, 0u);
  EXPECT_TRUE(res.report.passed);
  ASSERT_TRUE(res.report.violation_addr.has_value());
  EXPECT_EQ(*res.report.violation_addr, soc_layout::kSinkBase);
}

TEST(Scenario, AttackEqualToLegitPatchIsHarmless) {
  // Overwriting the parameters with the same values changes nothing.
  const auto clean = run_scenario(demo_config(2, kRegion), demo_image(), demo_programs());
  const auto same = run_scenario(demo_config(3, kRegion, kRegion), demo_image(),
                                 demo_programs());
  EXPECT_FALSE(same.report.violation);
  EXPECT_EQ(same.report.leaked_pixels, 0u);
  EXPECT_EQ(same.emitted, clean.emitted);
  EXPECT_FALSE(same.report.passed);  // scenario 3 expects a leak; none happened
}

TEST(Scenario, ShellRaisesNoViolationWhenAttackStillCovers) {
  // A "corruption" that still covers the sensitive region: shelled run
  // completes, nothing leaks.
  const PatchParams wider{2, 14, 2, 14};
  const auto res =
      run_scenario(demo_config(4, kRegion, wider), demo_image(), demo_programs());
  EXPECT_FALSE(res.report.violation);
  EXPECT_EQ(res.report.leaked_pixels, 0u);
}

TEST(Scenario, EmptyAttackPatchBlursNothing) {
  const auto res = run_scenario(demo_config(3, kRegion, PatchParams{0, 0, 0, 0}),
                                demo_image(), demo_programs());
  EXPECT_FALSE(res.report.violation);
  // Every sensitive pixel the blur would have changed escapes verbatim.
  const Image input = demo_image();
  const Image reference = blur_kernel(input, kRegion);
  uint64_t changed = 0;
  for (uint32_t r = kRegion.i_row; r < kRegion.e_row; ++r)
    for (uint32_t c = kRegion.i_col; c < kRegion.e_col; ++c)
      if (reference.at(r, c) != input.at(r, c)) ++changed;
  EXPECT_EQ(res.report.leaked_pixels, changed);
}

TEST(Scenario, SoftwareWithoutUntagTrapsEvenWithoutAttack) {
  // Declassification disabled: the blurred pixels keep their taint and the
  // emission loop trips on the first tagged word.
  const Image img = demo_image();
  Soc soc = build_soc(demo_config(1, kRegion), img, demo_programs());
  soc.policy.untag_enabled = false;
  const RunOutcome out = run(soc.cpu, *soc.mem, soc.policy, kScenarioStepBudget);
  EXPECT_EQ(out.last.kind, StepEvent::Kind::dift_violation);
}

TEST(Scenario, ReportJsonShapeAndDeterminism) {
  const auto res =
      run_scenario(demo_config(4, kRegion, kShrunk), demo_image(), demo_programs());
  ScenarioReport rep = res.report;
  rep.output_image = "out.pgm";
  const std::string text = report_to_json(rep);

  const auto j = nlohmann::json::parse(text);
  ASSERT_TRUE(j.is_object());
  EXPECT_EQ(j.size(), 9u);
  EXPECT_EQ(j.at("scenario"), 4);
  EXPECT_EQ(j.at("violation"), true);
  EXPECT_EQ(j.at("violation_site"), "shell");
  EXPECT_TRUE(j.at("violation_addr").is_string());
  EXPECT_EQ(j.at("leaked_pixels"), 0);
  EXPECT_TRUE(j.at("instret").is_number_unsigned());
  EXPECT_EQ(j.at("output_image"), "out.pgm");
  EXPECT_EQ(j.at("expected"), "attack_blocked");
  EXPECT_EQ(j.at("passed"), true);

  // Key order is pinned for byte-identical reports.
  EXPECT_EQ(text.find("\"scenario\""), text.find('\"'));
  const auto res2 =
      run_scenario(demo_config(4, kRegion, kShrunk), demo_image(), demo_programs());
  ScenarioReport rep2 = res2.report;
  rep2.output_image = "out.pgm";
  EXPECT_EQ(report_to_json(rep2), text);

  // A clean report has a null violation_addr.
  const auto clean = run_scenario(demo_config(1, kRegion), demo_image(), demo_programs());
  const auto jc = nlohmann::json::parse(report_to_json(clean.report));
  EXPECT_TRUE(jc.at("violation_addr").is_null());
  EXPECT_EQ(jc.at("violation_site"), "none");
}

TEST(Scenario, FileRoundTripThroughRunScenarioFiles) {
  const std::string dir = ::testing::TempDir();
  const std::string in_path = dir + "soc_in.pgm";
  const std::string out_path = dir + "soc_out.pgm";
  const std::string rep_path = dir + "soc_rep.json";
  save_pgm(demo_image(), in_path);

  ScenarioConfig cfg = demo_config(2, kRegion);
  cfg.image_path = in_path;
  const ScenarioReport rep = run_scenario_files(cfg, demo_programs(), out_path, rep_path);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(load_pgm(out_path), blur_kernel(demo_image(), kRegion));

  std::ifstream in(rep_path);
  ASSERT_TRUE(in.good());
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("scenario"), 2);
  EXPECT_EQ(j.at("passed"), true);
}

// Property over random honest configurations: the hardware path always
// reproduces the software path byte for byte.
TEST(Scenario, HardwareEqualsSoftwareOnRandomCleanRuns) {
  std::mt19937 rng(2024);
  for (int iter = 0; iter < 10; ++iter) {
    const uint32_t rows = 8 + (rng() % 3) * 4;
    const uint32_t cols = 8 + (rng() % 3) * 4;
    const Image img = testsup::random_image(rng, rows, cols);
    const PatchParams region = testsup::random_patch(rng, rows, cols);
    const auto sw = run_scenario(demo_config(1, region), img, demo_programs());
    const auto hw = run_scenario(demo_config(2, region), img, demo_programs());
    ASSERT_EQ(sw.outcome.last.kind, StepEvent::Kind::halted);
    ASSERT_EQ(hw.outcome.last.kind, StepEvent::Kind::halted);
    ASSERT_EQ(sw.emitted, hw.emitted) << rows << "x" << cols;
    ASSERT_EQ(sw.emitted, blur_kernel(img, region).pixels);
  }
}

}  // namespace
