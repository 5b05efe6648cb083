// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simulst/metrics.hpp"
#include "simulst/policy.hpp"

namespace simulst {

/// Inline stream description: the table model emits `target[i]` once
/// `reveal[i]` source frames are visible.
struct SyntheticSpec {
  std::vector<std::string> target;
  std::vector<int> reveal;
  std::int64_t duration_ms = 0;
  int frame_rate_hz = 50;
};

/// One evaluation item: a speech source (feature file or synthetic spec) plus
/// the reference translation.
struct ManifestEntry {
  std::string id;
  std::string reference;
  std::optional<std::string> features_path;  ///< already resolved to a usable path
  std::optional<SyntheticSpec> synthetic;
};

/// Parses a JSONL manifest: one object per line with `id`, `reference`, and
/// exactly one of `features_path` or `synthetic`. Relative feature paths are
/// resolved against the manifest's directory. Errors name the offending line.
std::vector<ManifestEntry> load_manifest(const std::string& path);

enum class ModelChoice { Table, File };

/// Harness knobs beyond PolicyConfig.
struct HarnessOptions {
  ModelChoice model = ModelChoice::Table;
  /// Per-decision compute cost charged to the clock: >= 0 fixed milliseconds,
  /// -1 to use measured wall time.
  double compute_cost_ms = 0.0;
  /// When non-empty, the whole corpus is re-run once per value for the
  /// latency-quality curve.
  std::vector<int> sweep_hold_n;
};

/// Per-utterance result record; one JSONL line in instances.jsonl.
struct InstanceLog {
  std::string id;
  std::string prediction;
  std::vector<std::int64_t> delays_ms;
  std::vector<std::int64_t> elapsed_ms;
  std::int64_t source_duration_ms = 0;
  std::string reference;

  bool operator==(const InstanceLog&) const = default;
};

/// An entry the run could not evaluate; recorded, excluded from aggregation.
struct InstanceFailure {
  std::string id;
  std::string error;
};

/// One point of the latency-quality curve.
struct CurvePoint {
  std::string label;
  double bleu = 0.0;
  std::optional<double> al_ms;
};

/// Everything a run produces besides the instance logs.
struct RunReport {
  PolicyConfig config;
  ModelChoice model = ModelChoice::Table;
  double compute_cost_ms = 0.0;
  std::vector<int> sweep_hold_n;

  std::vector<std::string> instance_ids;       ///< successful instances, manifest order
  std::vector<LatencyReport> instance_latency;  ///< parallel to instance_ids
  std::vector<InstanceFailure> failures;
  CorpusReport corpus;
  std::vector<CurvePoint> curve;
};

struct EvalResult {
  RunReport report;
  std::vector<InstanceLog> logs;  ///< successful instances, manifest order
};

/// Runs every manifest entry through the streaming policy and aggregates.
/// Entry-level problems become failures in the report; config problems throw.
EvalResult run_eval(const std::vector<ManifestEntry>& entries, const PolicyConfig& config,
                    const HarnessOptions& options);

/// Writes instances.jsonl, report.json, and curve.tsv into out_dir (created if
/// missing). Identical inputs produce byte-identical files.
void write_outputs(const EvalResult& result, const std::string& out_dir);

/// Reads an instances.jsonl written by write_outputs().
std::vector<InstanceLog> load_instance_logs(const std::string& path);

/// Recomputes the corpus numbers from instance logs alone; write_outputs()'s
/// report.json must match this to 1e-9.
CorpusReport recompute_corpus(const std::vector<InstanceLog>& logs);

/// Latency ref_len convention shared by run_eval and recompute_corpus:
/// whitespace token count of the reference.
int reference_length(const std::string& reference);

}  // namespace simulst
