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

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diftsim/assembler.hpp"
#include "diftsim/blur_accel.hpp"
#include "diftsim/cpu.hpp"
#include "diftsim/image.hpp"
#include "diftsim/memory_map.hpp"
#include "diftsim/pgm.hpp"
#include "diftsim/tag.hpp"

namespace diftsim {

// Default system layout: instruction RAM, data RAM, the accelerator register
// file and the write-only output port.
namespace soc_layout {
inline constexpr uint32_t kInstrBase = 0x0000'0000;
inline constexpr uint32_t kInstrSize = 32 * 1024;
inline constexpr uint32_t kDataBase = 0x0010'0000;
inline constexpr uint32_t kDataSize = 32 * 1024;
inline constexpr uint32_t kAccelBase = 0x1A20'0000;
inline constexpr uint32_t kAccelSize = 64;
inline constexpr uint32_t kSinkBase = 0x1A30'0000;
inline constexpr uint32_t kSinkSize = 4;

// Application parameter block at the bottom of data RAM. The word order is
// what the demo programs expect: src, dst, rows, cols, then the four patch
// parameters.
inline constexpr uint32_t kParamBase = kDataBase;
inline constexpr uint32_t kParamBytes = 32;
inline constexpr uint32_t kSrcBufBase = kDataBase + kParamBytes;
}  // namespace soc_layout

/// Write-only output port. Everything the application emits lands here, in
/// write order; the harness reads it back as the produced image.
class SinkPort final : public MmioDevice {
 public:
  ReadResult read(uint32_t offset, unsigned) override {
    throw DeviceFault{offset};  // write-only
  }

  void write(uint32_t offset, unsigned width, uint32_t value, Tag) override {
    if (offset + width > soc_layout::kSinkSize) throw DeviceFault{offset};
    for (unsigned i = 0; i < width; ++i)
      emitted_.push_back(static_cast<uint8_t>(value >> (8 * i)));
  }

  const std::vector<uint8_t>& emitted() const noexcept { return emitted_; }

 private:
  std::vector<uint8_t> emitted_;
};

class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Demo application sources, assembled when the SoC is built.
struct ProgramSet {
  std::string software;  // blurs on the core, declassifies, emits
  std::string hardware;  // drives the accelerator, emits
};

struct ScenarioConfig {
  int id = 1;
  bool use_accel = false;
  bool use_shell = false;
  std::optional<PatchParams> attack;  // corrupted patch parameters
  std::string image_path;
  PatchParams sensitive_region;  // ground-truth sensitive pixels
  PatchParams legit_patch;       // what the honest application configures

  bool operator==(const ScenarioConfig&) const = default;
};

/// The five demo configurations. 1: software path. 2: accelerator, no
/// attack. 3: accelerator under attack, unprotected. 4: accelerator under
/// attack behind the shell. 5: software path under the same attack.
inline ScenarioConfig scenario_preset(int id) {
  ScenarioConfig cfg;
  cfg.id = id;
  switch (id) {
    case 1: break;
    case 2: cfg.use_accel = true; break;
    case 3: cfg.use_accel = true; break;
    case 4: cfg.use_accel = true; cfg.use_shell = true; break;
    case 5: break;
    default: throw HarnessError("scenario id must be 1..5");
  }
  return cfg;
}

inline bool scenario_has_attack(int id) { return id >= 3; }

inline const char* scenario_expected(int id) {
  switch (id) {
    case 1:
    case 2: return "clean";
    case 3: return "attack_succeeded";
    case 4:
    case 5: return "attack_blocked";
  }
  return "?";
}

/// One assembled system: memory map, core state, policy and devices.
/// The map is heap-pinned because the devices keep references into it.
struct Soc {
  std::unique_ptr<MemoryMap> mem;
  CpuState cpu;
  PolicyConfig policy;
  std::shared_ptr<BlurAccelerator> accel;  // null without use_accel
  std::shared_ptr<SinkPort> sink;
  uint32_t src_addr = 0;
  uint32_t dst_addr = 0;
};

/// Builds the SoC for one scenario: default memory map, assembled application
/// in instruction RAM, input image in data RAM with the sensitive pixels
/// tagged, honest parameters in the parameter block, devices registered.
inline Soc build_soc(const ScenarioConfig& cfg, const Image& input,
                     const ProgramSet& programs) {
  using namespace soc_layout;

  if (input.rows == 0 || input.cols == 0 || input.cols % 4 != 0)
    throw HarnessError("image geometry: need rows > 0 and cols a multiple of 4");
  if (!cfg.sensitive_region.valid_for(input.rows, input.cols))
    throw HarnessError("sensitive region exceeds the image");
  if (!cfg.legit_patch.valid_for(input.rows, input.cols))
    throw HarnessError("legitimate patch exceeds the image");
  if (cfg.attack && !cfg.attack->valid_for(input.rows, input.cols))
    throw HarnessError("attack patch exceeds the image");

  const uint64_t pixel_bytes = uint64_t{input.rows} * input.cols;
  if (kParamBytes + 2 * pixel_bytes > kDataSize)
    throw HarnessError("image too large for the 32 KB data RAM");

  AsmProgram prog = assemble(cfg.use_accel ? programs.hardware : programs.software);
  if (prog.origin != 0)
    throw HarnessError("application must be linked at address 0");
  const std::vector<uint8_t> image_bytes = prog.to_bytes();
  if (image_bytes.size() > kInstrSize)
    throw HarnessError("program too large for the 32 KB instruction RAM");

  Soc soc;
  soc.mem = std::make_unique<MemoryMap>();
  soc.mem->add_ram({kInstrBase, kInstrSize, RegionKind::ram, /*executable=*/true});
  soc.mem->add_ram({kDataBase, kDataSize, RegionKind::ram, false});
  soc.sink = std::make_shared<SinkPort>();
  soc.mem->map_device({kSinkBase, kSinkSize, RegionKind::mmio, false}, soc.sink);
  if (cfg.use_accel) {
    soc.accel = std::make_shared<BlurAccelerator>(
        *soc.mem, cfg.use_shell ? AccelMode::shelled : AccelMode::bare);
    soc.mem->map_device({kAccelBase, kAccelSize, RegionKind::mmio, false}, soc.accel);
  }

  soc.mem->load_blob(kInstrBase, image_bytes);

  soc.src_addr = kSrcBufBase;
  soc.dst_addr = kSrcBufBase + static_cast<uint32_t>(pixel_bytes);

  // Parameter block, trusted and untagged.
  const uint32_t params[8] = {
      soc.src_addr, soc.dst_addr, input.rows, input.cols,
      cfg.legit_patch.i_row, cfg.legit_patch.e_row,
      cfg.legit_patch.i_col, cfg.legit_patch.e_col,
  };
  std::vector<uint8_t> param_bytes;
  for (uint32_t w : params) {
    param_bytes.push_back(static_cast<uint8_t>(w));
    param_bytes.push_back(static_cast<uint8_t>(w >> 8));
    param_bytes.push_back(static_cast<uint8_t>(w >> 16));
    param_bytes.push_back(static_cast<uint8_t>(w >> 24));
  }
  soc.mem->load_blob(kParamBase, param_bytes);

  // Input image with one tag bit per pixel inside the sensitive region.
  std::vector<uint8_t> tag_stream(input.pixels.size(), 0);
  for (uint32_t r = cfg.sensitive_region.i_row; r < cfg.sensitive_region.e_row; ++r)
    for (uint32_t c = cfg.sensitive_region.i_col; c < cfg.sensitive_region.e_col; ++c)
      tag_stream[size_t{r} * input.cols + c] = 1;
  soc.mem->load_blob(soc.src_addr, input.pixels, tag_stream);

  soc.policy.sink_ranges = {{kSinkBase, kSinkSize}};
  soc.policy.propagation = PropagationMode::conservative_word;
  soc.policy.untag_enabled = true;
  soc.cpu.pc = kInstrBase;
  return soc;
}

/// The attack: a pre-execution overwrite of the application's patch
/// parameters through an I/O vulnerability. Attacker data carries no tags.
inline void inject_attack(Soc& soc, const PatchParams& corrupted) {
  const uint32_t values[4] = {corrupted.i_row, corrupted.e_row,
                              corrupted.i_col, corrupted.e_col};
  std::vector<uint8_t> bytes;
  for (uint32_t w : values) {
    bytes.push_back(static_cast<uint8_t>(w));
    bytes.push_back(static_cast<uint8_t>(w >> 8));
    bytes.push_back(static_cast<uint8_t>(w >> 16));
    bytes.push_back(static_cast<uint8_t>(w >> 24));
  }
  soc.mem->load_blob(soc_layout::kParamBase + 16, bytes);
}

/// A leaked pixel is one that should have been obfuscated but was emitted
/// verbatim: it lies in the sensitive region, the reference (honest) blur
/// would have changed it, and the emitted byte equals the input byte.
inline uint64_t count_leaked_pixels(const Image& input, std::span<const uint8_t> emitted,
                                    const PatchParams& sensitive_region,
                                    const Image& reference) {
  uint64_t leaked = 0;
  const size_t n = std::min(emitted.size(), input.pixels.size());
  for (size_t p = 0; p < n; ++p) {
    const uint32_t r = static_cast<uint32_t>(p) / input.cols;
    const uint32_t c = static_cast<uint32_t>(p) % input.cols;
    if (!sensitive_region.contains(r, c)) continue;
    if (emitted[p] == input.pixels[p] && reference.pixels[p] != input.pixels[p]) ++leaked;
  }
  return leaked;
}

struct ScenarioReport {
  int scenario = 0;
  bool violation = false;
  std::string violation_site = "none";  // "cpu-sink" | "shell" | "none"
  std::optional<uint32_t> violation_addr;
  uint64_t leaked_pixels = 0;
  uint64_t instret = 0;
  std::string output_image;
  std::string expected;
  bool passed = false;
};

struct ScenarioResult {
  ScenarioReport report;
  Image output;                  // emitted prefix, zero-padded to geometry
  std::vector<uint8_t> emitted;  // exactly what reached the port
  RunOutcome outcome;
};

inline constexpr uint64_t kScenarioStepBudget = 100'000'000;

/// Runs one scenario end to end on an in-memory image: build, optional
/// attack injection, execution to halt/violation/timeout, metric extraction.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const Image& input,
                                   const ProgramSet& programs) {
  ScenarioResult res;
  Soc soc = build_soc(cfg, input, programs);
  if (cfg.attack) inject_attack(soc, *cfg.attack);

  res.outcome = run(soc.cpu, *soc.mem, soc.policy, kScenarioStepBudget);
  res.emitted = soc.sink->emitted();

  ScenarioReport& rep = res.report;
  rep.scenario = cfg.id;
  rep.instret = res.outcome.instret;
  rep.expected = scenario_expected(cfg.id);

  if (res.outcome.last.kind == StepEvent::Kind::dift_violation) {
    rep.violation = true;
    rep.violation_site = "cpu-sink";
    rep.violation_addr = res.outcome.last.addr;
  } else if (soc.accel && soc.accel->violation()) {
    rep.violation = true;
    rep.violation_site = "shell";
    rep.violation_addr = soc.accel->violation()->addr;
  }

  const Image reference = blur_kernel(input, cfg.legit_patch);
  rep.leaked_pixels = count_leaked_pixels(input, res.emitted, cfg.sensitive_region, reference);

  res.output.rows = input.rows;
  res.output.cols = input.cols;
  res.output.pixels.assign(input.pixels.size(), 0);
  std::copy_n(res.emitted.begin(), std::min(res.emitted.size(), res.output.pixels.size()),
              res.output.pixels.begin());

  const bool halted_ok = res.outcome.last.kind == StepEvent::Kind::halted &&
                         res.outcome.last.exit_code == 0;
  const bool complete = res.emitted.size() == input.pixels.size();
  switch (cfg.id) {
    case 1:
    case 2:
      rep.passed = !rep.violation && halted_ok && complete &&
                   rep.leaked_pixels == 0 && res.emitted == reference.pixels;
      break;
    case 3:
      rep.passed = !rep.violation && halted_ok && complete && rep.leaked_pixels >= 1;
      break;
    case 4:
      rep.passed = rep.violation && rep.violation_site == "shell" && rep.leaked_pixels == 0;
      break;
    case 5:
      rep.passed = rep.violation && rep.violation_site == "cpu-sink" && rep.leaked_pixels == 0;
      break;
    default:
      rep.passed = false;
  }
  return res;
}

inline std::string report_to_json(const ScenarioReport& rep) {
  nlohmann::ordered_json j;
  j["scenario"] = rep.scenario;
  j["violation"] = rep.violation;
  j["violation_site"] = rep.violation_site;
  if (rep.violation_addr) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", *rep.violation_addr);
    j["violation_addr"] = buf;
  } else {
    j["violation_addr"] = nullptr;
  }
  j["leaked_pixels"] = rep.leaked_pixels;
  j["instret"] = rep.instret;
  j["output_image"] = rep.output_image;
  j["expected"] = rep.expected;
  j["passed"] = rep.passed;
  return j.dump(2) + "\n";
}

/// File-level wrapper used by the CLI: loads the input PGM, runs the
/// scenario, writes the output image and the JSON report when paths are
/// given.
inline ScenarioReport run_scenario_files(const ScenarioConfig& cfg,
                                         const ProgramSet& programs,
                                         const std::string& out_image_path,
                                         const std::string& report_path) {
  const Image input = load_pgm(cfg.image_path);
  ScenarioResult res = run_scenario(cfg, input, programs);
  res.report.output_image = out_image_path;
  if (!out_image_path.empty()) save_pgm(res.output, out_image_path);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw HarnessError("cannot create " + report_path);
    out << report_to_json(res.report);
  }
  return res.report;
}

}  // namespace diftsim
