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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diftsim/assembler.hpp"
#include "diftsim/pgm.hpp"
#include "diftsim/soc.hpp"
#include "diftsim_programs.hpp"

namespace {

using namespace diftsim;

ProgramSet demo_programs() {
  return {programs::kSoftwareBlur, programs::kHardwareBlur};
}

// "r0,r1,c0,c1" with inclusive starts and exclusive ends.
PatchParams parse_rect(const std::string& text) {
  PatchParams p;
  uint32_t* fields[4] = {&p.i_row, &p.e_row, &p.i_col, &p.e_col};
  size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    const size_t comma = text.find(',', pos);
    const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
    if (part.empty()) throw CLI::ValidationError("rectangle must be r0,r1,c0,c1");
    char* end = nullptr;
    const unsigned long v = std::strtoul(part.c_str(), &end, 0);
    if (end == nullptr || *end != '\0')
      throw CLI::ValidationError("bad rectangle component: " + part);
    *fields[i] = static_cast<uint32_t>(v);
    if (i < 3) {
      if (comma == std::string::npos)
        throw CLI::ValidationError("rectangle must be r0,r1,c0,c1");
      pos = comma + 1;
    } else if (comma != std::string::npos) {
      throw CLI::ValidationError("rectangle must have exactly four components");
    }
  }
  return p;
}

PatchParams default_attack(const PatchParams& legit) {
  // Shrink the blurred columns to a sliver, leaving the rest of the
  // sensitive area untouched by the filter.
  PatchParams a = legit;
  a.e_col = std::min(legit.i_col + 4, legit.e_col);
  return a;
}

void print_report_line(const ScenarioReport& rep) {
  std::printf("scenario %d: %-16s violation=%-5s site=%-8s leaked=%llu instret=%llu  %s\n",
              rep.scenario, rep.expected.c_str(), rep.violation ? "true" : "false",
              rep.violation_site.c_str(),
              static_cast<unsigned long long>(rep.leaked_pixels),
              static_cast<unsigned long long>(rep.instret),
              rep.passed ? "ok" : "MISMATCH");
}

int cmd_run(int scenario_id, const std::string& image, const std::string& sensitive,
            const std::string& attack, const std::string& out, const std::string& report) {
  ScenarioConfig cfg = scenario_preset(scenario_id);
  cfg.image_path = image;
  cfg.sensitive_region = parse_rect(sensitive);
  cfg.legit_patch = cfg.sensitive_region;
  if (!attack.empty())
    cfg.attack = parse_rect(attack);
  else if (scenario_has_attack(scenario_id))
    cfg.attack = default_attack(cfg.legit_patch);

  const ScenarioReport rep = run_scenario_files(cfg, demo_programs(), out, report);
  print_report_line(rep);
  return rep.passed ? 0 : 1;
}

int cmd_scenarios(const std::string& image, const std::string& sensitive,
                  const std::string& attack, const std::string& outdir) {
  std::optional<PatchParams> region;
  if (!sensitive.empty()) region = parse_rect(sensitive);

  bool all_ok = true;
  for (int id = 1; id <= 4; ++id) {
    ScenarioConfig cfg = scenario_preset(id);
    cfg.image_path = image;
    if (region) {
      cfg.sensitive_region = *region;
    } else {
      const Image img = load_pgm(image);  // default: centered half of the image
      cfg.sensitive_region = {img.rows / 4, 3 * img.rows / 4, img.cols / 4, 3 * img.cols / 4};
    }
    cfg.legit_patch = cfg.sensitive_region;
    if (scenario_has_attack(id))
      cfg.attack = attack.empty() ? default_attack(cfg.legit_patch) : parse_rect(attack);

    const std::string stem = outdir + "/scenario_" + std::to_string(id);
    const ScenarioReport rep =
        run_scenario_files(cfg, demo_programs(), stem + ".pgm", stem + ".json");
    print_report_line(rep);
    all_ok = all_ok && rep.passed;
  }
  return all_ok ? 0 : 1;
}

int cmd_asm(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << in_path << "\n";
    return 1;
  }
  std::string source((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    const AsmProgram prog = assemble(source);
    const std::vector<uint8_t> bytes = prog.to_bytes();
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot create " << out_path << "\n";
      return 1;
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    std::printf("%s: %zu words, origin 0x%08x\n", out_path.c_str(), prog.words.size(),
                prog.origin);
    return 0;
  } catch (const AsmError& e) {
    std::cerr << in_path << ":" << e.what() << "\n";
    return 1;
  }
}

int cmd_genimage(uint32_t rows, uint32_t cols, const std::string& pattern,
                 const std::string& out) {
  Image img = Image::filled(rows, cols, 0);
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      if (pattern == "checker")
        img.at(r, c) = ((r + c) & 1) ? 255 : 0;
      else
        img.at(r, c) = static_cast<uint8_t>((r * 7 + c * 13) & 0xFF);
    }
  }
  save_pgm(img, out);
  std::printf("%s: %ux%u %s\n", out.c_str(), cols, rows, pattern.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DIFT-protected SoC demo: tag-tracking core, tagged memory, "
               "blur accelerator and shell"};
  app.require_subcommand(1);

  // demo run
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  int scenario_id = 1;
  std::string image, sensitive, attack, out_image, report;
  run_cmd->add_option("--scenario", scenario_id, "Scenario 1..5")->required()
      ->check(CLI::Range(1, 5));
  run_cmd->add_option("--image", image, "Input PGM (P5)")->required();
  run_cmd->add_option("--sensitive", sensitive, "Sensitive rectangle r0,r1,c0,c1")->required();
  run_cmd->add_option("--attack", attack, "Corrupted patch r0,r1,c0,c1");
  run_cmd->add_option("--out", out_image, "Output PGM path");
  run_cmd->add_option("--report", report, "Report JSON path");

  // demo scenarios
  auto* sc_cmd = app.add_subcommand("scenarios", "Run the four demo scenarios");
  bool all = false;
  std::string sc_image, sc_sensitive, sc_attack, outdir = ".";
  sc_cmd->add_flag("--all", all, "Run scenarios 1 through 4");
  sc_cmd->add_option("--image", sc_image, "Input PGM (P5)")->required();
  sc_cmd->add_option("--sensitive", sc_sensitive, "Sensitive rectangle r0,r1,c0,c1");
  sc_cmd->add_option("--attack", sc_attack, "Corrupted patch r0,r1,c0,c1");
  sc_cmd->add_option("--outdir", outdir, "Directory for images and reports");

  // demo asm
  auto* asm_cmd = app.add_subcommand("asm", "Assemble a program image");
  std::string asm_in, asm_out;
  asm_cmd->add_option("input", asm_in, "Assembly source")->required();
  asm_cmd->add_option("-o,--output", asm_out, "Raw word-stream output")->required();

  // demo genimage
  auto* gen_cmd = app.add_subcommand("genimage", "Generate a test image");
  uint32_t rows = 64, cols = 64;
  std::string pattern = "checker", gen_out;
  gen_cmd->add_option("--rows", rows, "Rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cols", cols, "Columns (multiple of 4)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--pattern", pattern, "checker | gradient")
      ->check(CLI::IsMember({"checker", "gradient"}));
  gen_cmd->add_option("-o,--output", gen_out, "Output PGM path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(scenario_id, image, sensitive, attack, out_image, report);
    if (sc_cmd->parsed())
      return cmd_scenarios(sc_image, sc_sensitive, sc_attack, outdir);
    if (asm_cmd->parsed())
      return cmd_asm(asm_in, asm_out);
    if (gen_cmd->parsed())
      return cmd_genimage(rows, cols, pattern, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
