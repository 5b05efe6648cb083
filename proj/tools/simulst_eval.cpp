// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//
// Batch evaluation front end: reads a JSONL manifest, runs every stream
// through the hold-n policy, and writes instance logs, a corpus report, and a
// latency-quality curve into the output directory.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "simulst/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Streaming speech translation evaluation harness"};

  std::string manifest_path;
  std::string out_dir;
  std::string model = "table";
  simulst::PolicyConfig config;
  double compute_cost_ms = 0.0;
  std::vector<int> sweep_hold_n;

  app.add_option("--manifest", manifest_path, "JSONL manifest of evaluation instances")
      ->required();
  app.add_option("--out", out_dir, "Output directory for instances.jsonl / report.json / curve.tsv")
      ->required();
  app.add_option("--start-ms", config.start_ms, "Wait this long before the first decision")
      ->capture_default_str();
  app.add_option("--chunk-ms", config.chunk_ms, "Audio consumed between later decisions")
      ->capture_default_str();
  app.add_option("--hold-n", config.hold_n,
                 "Withhold the last n hypothesis tokens until more speech arrives")
      ->capture_default_str();
  app.add_option("--beam", config.beam, "Beam width")->capture_default_str();
  app.add_option("--max-len", config.max_len, "Hypothesis length cap")->capture_default_str();
  app.add_option("--model", model, "Score model: 'table' (synthetic specs) or 'file'")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "file"}));
  app.add_option("--sweep-hold-n", sweep_hold_n,
                 "Comma-separated hold-n values to sweep for curve.tsv")
      ->delimiter(',');
  app.add_option("--compute-cost-ms", compute_cost_ms,
                 "Per-decision compute cost charged to the clock; -1 measures wall time")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::vector<simulst::ManifestEntry> entries = simulst::load_manifest(manifest_path);

    simulst::HarnessOptions options;
    options.model = model == "table" ? simulst::ModelChoice::Table : simulst::ModelChoice::File;
    options.compute_cost_ms = compute_cost_ms;
    options.sweep_hold_n = sweep_hold_n;

    const simulst::EvalResult result = simulst::run_eval(entries, config, options);
    simulst::write_outputs(result, out_dir);

    const simulst::RunReport& report = result.report;
    std::printf("instances: %zu ok, %zu failed\n", result.logs.size(), report.failures.size());
    for (const simulst::InstanceFailure& failure : report.failures) {
      std::fprintf(stderr, "failed %s: %s\n", failure.id.c_str(), failure.error.c_str());
    }
    if (!result.logs.empty()) {
      const simulst::LatencyReport& mean = report.corpus.mean_latency;
      std::printf("BLEU %s", simulst::format_bleu(report.corpus.bleu.score).c_str());
      if (mean.al_ms) std::printf("  AL %s s", simulst::format_seconds(*mean.al_ms).c_str());
      if (mean.laal_ms) std::printf("  LAAL %s s", simulst::format_seconds(*mean.laal_ms).c_str());
      if (mean.laal_ca_ms) {
        std::printf("  LAAL_CA %s s", simulst::format_seconds(*mean.laal_ca_ms).c_str());
      }
      std::printf("\n");
    }
    std::printf("wrote %s/{instances.jsonl,report.json,curve.tsv}\n", out_dir.c_str());
    return report.failures.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
