// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulst/harness.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "simulst/adapter.hpp"
#include "simulst/beam.hpp"
#include "simulst/tokenizer.hpp"

namespace simulst {

namespace {

using ordered_json = nlohmann::ordered_json;

// Fixed weight seed for the file-model adapter stack; an arbitrary constant so
// repeated runs see identical weights.
constexpr std::uint64_t kAdapterSeed = 0x5eedbeefULL;
constexpr int kAdapterFilters = 16;
constexpr int kAdapterOutputDim = 16;

[[noreturn]] void manifest_error(const std::string& path, int line, const std::string& what) {
  throw std::invalid_argument(path + " line " + std::to_string(line) + ": " + what);
}

SyntheticSpec parse_synthetic(const ordered_json& node, const std::string& path, int line) {
  if (!node.is_object()) manifest_error(path, line, "`synthetic` must be an object");
  SyntheticSpec spec;
  if (!node.contains("target") || !node["target"].is_array()) {
    manifest_error(path, line, "`synthetic.target` must be an array of token strings");
  }
  for (const auto& item : node["target"]) {
    if (!item.is_string() || item.get<std::string>().empty()) {
      manifest_error(path, line, "`synthetic.target` entries must be non-empty strings");
    }
    spec.target.push_back(item.get<std::string>());
  }
  if (!node.contains("reveal") || !node["reveal"].is_array()) {
    manifest_error(path, line, "`synthetic.reveal` must be an array of frame counts");
  }
  for (const auto& item : node["reveal"]) {
    if (!item.is_number_integer()) {
      manifest_error(path, line, "`synthetic.reveal` entries must be integers");
    }
    spec.reveal.push_back(item.get<int>());
  }
  if (spec.target.size() != spec.reveal.size()) {
    manifest_error(path, line, "`synthetic.target` and `synthetic.reveal` lengths differ");
  }
  if (!node.contains("duration_ms") || !node["duration_ms"].is_number_integer()) {
    manifest_error(path, line, "`synthetic.duration_ms` must be an integer");
  }
  spec.duration_ms = node["duration_ms"].get<std::int64_t>();
  if (spec.duration_ms <= 0) manifest_error(path, line, "`synthetic.duration_ms` must be positive");
  if (node.contains("frame_rate_hz")) {
    if (!node["frame_rate_hz"].is_number_integer()) {
      manifest_error(path, line, "`synthetic.frame_rate_hz` must be an integer");
    }
    spec.frame_rate_hz = node["frame_rate_hz"].get<int>();
  }
  if (spec.frame_rate_hz <= 0) manifest_error(path, line, "`synthetic.frame_rate_hz` must be positive");
  return spec;
}

// Stream duration for a stored feature file: the shortest duration whose frame
// count floor(duration * rate / 1000) reaches the stored row count.
std::int64_t duration_for_rows(int rows, int rate) {
  return (static_cast<std::int64_t>(rows) * 1000 + rate - 1) / rate;
}

SpeechStream build_stream(const ManifestEntry& entry) {
  if (entry.synthetic) {
    return SpeechStream::synthetic(entry.id, entry.synthetic->duration_ms,
                                   entry.synthetic->frame_rate_hz);
  }
  FeatureFile file = read_feature_file(*entry.features_path);
  const std::int64_t duration =
      duration_for_rows(file.frames.rows(), file.frame_rate_hz);
  return SpeechStream::with_frames(entry.id, duration, file.frame_rate_hz,
                                   std::move(file.frames));
}

std::vector<int> intern_words(Vocabulary& vocab, const std::vector<std::string>& words) {
  std::vector<int> ids;
  ids.reserve(words.size());
  for (const std::string& w : words) ids.push_back(vocab.intern(w));
  return ids;
}

// Evenly spaced reveal schedule over `total_rows` model-visible rows: token i
// becomes available once ceil((i+1) * total_rows / count) rows are visible, so
// the last token unlocks exactly at the end of the stream.
std::vector<int> spread_reveal(int count, int total_rows) {
  std::vector<int> reveal(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    reveal[static_cast<std::size_t>(i)] = static_cast<int>(
        (static_cast<std::int64_t>(i + 1) * total_rows + count - 1) / count);
  }
  return reveal;
}

struct InstanceOutcome {
  InstanceLog log;
  LatencyReport latency;
};

InstanceOutcome run_one(const ManifestEntry& entry, const PolicyConfig& config,
                        const HarnessOptions& options, Vocabulary& vocab,
                        const CostModel& cost) {
  const SpeechStream stream = build_stream(entry);

  AdapterConfig adapter;
  std::unique_ptr<TableModel> model;
  if (options.model == ModelChoice::Table) {
    if (!entry.synthetic) {
      throw std::invalid_argument("the table model needs a `synthetic` spec");
    }
    // The table model's reveal thresholds are raw source-frame counts, so the
    // adapter must keep the time axis unchanged.
    adapter = AdapterConfig::identity(stream.feature_dim());
    model = std::make_unique<TableModel>(vocab, intern_words(vocab, entry.synthetic->target),
                                         entry.synthetic->reveal);
  } else {
    // File model: run the full strided adapter stack and score against a table
    // built from the reference, its reveal schedule spread evenly over the
    // adapted (downsampled) rows.
    adapter = AdapterConfig::seeded(stream.feature_dim(), kAdapterFilters, kAdapterOutputDim,
                                    kAdapterSeed);
    const std::vector<std::string> words = split_words(entry.reference);
    const int rows1 = output_length(stream.total_frames(), adapter.conv1.kernel,
                                    adapter.conv1.stride, adapter.conv1.padding);
    const int rows2 = output_length(rows1, adapter.conv2.kernel, adapter.conv2.stride,
                                    adapter.conv2.padding);
    model = std::make_unique<TableModel>(vocab, intern_words(vocab, words),
                                         spread_reveal(static_cast<int>(words.size()), rows2));
  }

  const MockEncoder encoder;
  const StreamResult result = run_stream(stream, encoder, adapter, *model, config, cost);

  InstanceOutcome outcome;
  outcome.log.id = entry.id;
  outcome.log.prediction = vocab.detokenize(result.log.tokens());
  outcome.log.delays_ms = result.log.delays_ms();
  outcome.log.elapsed_ms = result.log.elapsed_ms();
  outcome.log.source_duration_ms = stream.duration_ms();
  outcome.log.reference = entry.reference;

  DelaySeries series;
  series.delays_ms.assign(outcome.log.delays_ms.begin(), outcome.log.delays_ms.end());
  series.elapsed_ms.assign(outcome.log.elapsed_ms.begin(), outcome.log.elapsed_ms.end());
  series.source_duration_ms = static_cast<double>(outcome.log.source_duration_ms);
  series.ref_len = reference_length(entry.reference);
  outcome.latency = latency_report(series);
  return outcome;
}

std::unique_ptr<CostModel> make_cost_model(double compute_cost_ms) {
  if (compute_cost_ms == -1.0) return std::make_unique<MeasuredCost>();
  if (compute_cost_ms < 0.0) {
    throw std::invalid_argument("compute cost must be >= 0 ms, or -1 for measured wall time");
  }
  return std::make_unique<FixedCost>(compute_cost_ms);
}

const char* model_name(ModelChoice choice) {
  return choice == ModelChoice::Table ? "table" : "file";
}

ordered_json latency_json(const LatencyReport& report) {
  ordered_json node;
  node["al_ms"] = report.al_ms ? ordered_json(*report.al_ms) : ordered_json(nullptr);
  node["laal_ms"] = report.laal_ms ? ordered_json(*report.laal_ms) : ordered_json(nullptr);
  node["laal_ca_ms"] =
      report.laal_ca_ms ? ordered_json(*report.laal_ca_ms) : ordered_json(nullptr);
  return node;
}

ordered_json instance_json(const InstanceLog& log) {
  ordered_json node;
  node["id"] = log.id;
  node["prediction"] = log.prediction;
  node["delays_ms"] = log.delays_ms;
  node["elapsed_ms"] = log.elapsed_ms;
  node["source_duration_ms"] = log.source_duration_ms;
  node["reference"] = log.reference;
  return node;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int reference_length(const std::string& reference) {
  return static_cast<int>(split_words(reference).size());
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open manifest " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    ordered_json node;
    try {
      node = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      manifest_error(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!node.is_object()) manifest_error(path, line_no, "record must be a JSON object");

    ManifestEntry entry;
    if (!node.contains("id") || !node["id"].is_string() || node["id"].get<std::string>().empty()) {
      manifest_error(path, line_no, "`id` must be a non-empty string");
    }
    entry.id = node["id"].get<std::string>();
    if (!node.contains("reference") || !node["reference"].is_string() ||
        node["reference"].get<std::string>().empty()) {
      manifest_error(path, line_no, "`reference` must be a non-empty string");
    }
    entry.reference = node["reference"].get<std::string>();

    const bool has_file = node.contains("features_path");
    const bool has_synth = node.contains("synthetic");
    if (has_file == has_synth) {
      manifest_error(path, line_no, "exactly one of `features_path` or `synthetic` is required");
    }
    if (has_file) {
      if (!node["features_path"].is_string()) {
        manifest_error(path, line_no, "`features_path` must be a string");
      }
      std::filesystem::path p = node["features_path"].get<std::string>();
      if (p.is_relative()) p = base / p;
      entry.features_path = p.string();
    } else {
      entry.synthetic = parse_synthetic(node["synthetic"], path, line_no);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

EvalResult run_eval(const std::vector<ManifestEntry>& entries, const PolicyConfig& config,
                    const HarnessOptions& options) {
  config.validate();
  const std::unique_ptr<CostModel> cost = make_cost_model(options.compute_cost_ms);

  // One vocabulary for the whole run, filled in manifest order before any
  // stream runs so every score model sees the same id space.
  Vocabulary vocab;
  for (const ManifestEntry& entry : entries) {
    if (entry.synthetic) {
      for (const std::string& w : entry.synthetic->target) vocab.intern(w);
    }
  }
  for (const ManifestEntry& entry : entries) {
    for (const std::string& w : split_words(entry.reference)) vocab.intern(w);
  }

  EvalResult result;
  result.report.config = config;
  result.report.model = options.model;
  result.report.compute_cost_ms = options.compute_cost_ms;
  result.report.sweep_hold_n = options.sweep_hold_n;

  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  for (const ManifestEntry& entry : entries) {
    try {
      InstanceOutcome outcome = run_one(entry, config, options, vocab, *cost);
      hyps.push_back(outcome.log.prediction);
      refs.push_back(outcome.log.reference);
      result.report.instance_ids.push_back(entry.id);
      result.report.instance_latency.push_back(outcome.latency);
      result.logs.push_back(std::move(outcome.log));
    } catch (const std::exception& e) {
      result.report.failures.push_back(InstanceFailure{entry.id, e.what()});
    }
  }

  if (!result.logs.empty()) {
    result.report.corpus = aggregate(result.report.instance_latency, hyps, refs);
  }

  for (int hold_n : options.sweep_hold_n) {
    PolicyConfig swept = config;
    swept.hold_n = hold_n;
    swept.validate();
    CurvePoint point;
    point.label = "hold-" + std::to_string(hold_n);

    std::vector<LatencyReport> latencies;
    std::vector<std::string> sweep_hyps;
    std::vector<std::string> sweep_refs;
    for (const ManifestEntry& entry : entries) {
      try {
        InstanceOutcome outcome = run_one(entry, swept, options, vocab, *cost);
        latencies.push_back(outcome.latency);
        sweep_hyps.push_back(outcome.log.prediction);
        sweep_refs.push_back(outcome.log.reference);
      } catch (const std::exception&) {
        // Already recorded as a failure by the base pass; keep the curve to
        // the instances that run.
      }
    }
    if (!latencies.empty()) {
      const CorpusReport corpus = aggregate(latencies, sweep_hyps, sweep_refs);
      point.bleu = corpus.bleu.score;
      point.al_ms = corpus.mean_latency.al_ms;
    }
    result.report.curve.push_back(std::move(point));
  }
  return result;
}

void write_outputs(const EvalResult& result, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + out_dir + ": " + ec.message());
  }
  const std::filesystem::path dir(out_dir);

  std::string instances;
  for (const InstanceLog& log : result.logs) {
    instances += instance_json(log).dump();
    instances += '\n';
  }
  write_text_file((dir / "instances.jsonl").string(), instances);

  const RunReport& report = result.report;
  ordered_json root;
  root["config"] = {
      {"start_ms", report.config.start_ms}, {"chunk_ms", report.config.chunk_ms},
      {"hold_n", report.config.hold_n},     {"beam", report.config.beam},
      {"max_len", report.config.max_len},   {"model", model_name(report.model)},
      {"compute_cost_ms", report.compute_cost_ms}, {"sweep_hold_n", report.sweep_hold_n},
  };
  root["instances"] = ordered_json::array();
  for (std::size_t i = 0; i < report.instance_ids.size(); ++i) {
    ordered_json node = latency_json(report.instance_latency[i]);
    ordered_json entry;
    entry["id"] = report.instance_ids[i];
    entry.update(node);
    root["instances"].push_back(std::move(entry));
  }
  root["failures"] = ordered_json::array();
  for (const InstanceFailure& failure : report.failures) {
    root["failures"].push_back({{"id", failure.id}, {"error", failure.error}});
  }
  ordered_json corpus;
  corpus["utterances"] = report.corpus.utterances;
  corpus["with_latency"] = report.corpus.with_latency;
  corpus.update(latency_json(report.corpus.mean_latency));
  corpus["bleu"] = {
      {"score", report.corpus.bleu.score},
      {"precisions", report.corpus.bleu.precisions},
      {"brevity_penalty", report.corpus.bleu.brevity_penalty},
      {"hyp_tokens", report.corpus.bleu.hyp_tokens},
      {"ref_tokens", report.corpus.bleu.ref_tokens},
  };
  ordered_json summary;
  summary["bleu"] = format_bleu(report.corpus.bleu.score);
  summary["al_s"] = report.corpus.mean_latency.al_ms
                        ? ordered_json(format_seconds(*report.corpus.mean_latency.al_ms))
                        : ordered_json(nullptr);
  summary["laal_s"] = report.corpus.mean_latency.laal_ms
                          ? ordered_json(format_seconds(*report.corpus.mean_latency.laal_ms))
                          : ordered_json(nullptr);
  summary["laal_ca_s"] =
      report.corpus.mean_latency.laal_ca_ms
          ? ordered_json(format_seconds(*report.corpus.mean_latency.laal_ca_ms))
          : ordered_json(nullptr);
  corpus["summary"] = std::move(summary);
  root["corpus"] = std::move(corpus);
  root["curve"] = ordered_json::array();
  for (const CurvePoint& point : report.curve) {
    ordered_json node;
    node["label"] = point.label;
    node["bleu"] = point.bleu;
    node["al_ms"] = point.al_ms ? ordered_json(*point.al_ms) : ordered_json(nullptr);
    root["curve"].push_back(std::move(node));
  }
  write_text_file((dir / "report.json").string(), root.dump(2) + "\n");

  std::string curve = "label\tBLEU\tAL_s\n";
  for (const CurvePoint& point : report.curve) {
    curve += point.label;
    curve += '\t';
    curve += format_bleu(point.bleu);
    curve += '\t';
    curve += point.al_ms ? format_seconds(*point.al_ms) : "NA";
    curve += '\n';
  }
  write_text_file((dir / "curve.tsv").string(), curve);
}

std::vector<InstanceLog> load_instance_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance log " + path);
  std::vector<InstanceLog> logs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json node;
    try {
      node = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      manifest_error(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    InstanceLog log;
    try {
      log.id = node.at("id").get<std::string>();
      log.prediction = node.at("prediction").get<std::string>();
      log.delays_ms = node.at("delays_ms").get<std::vector<std::int64_t>>();
      log.elapsed_ms = node.at("elapsed_ms").get<std::vector<std::int64_t>>();
      log.source_duration_ms = node.at("source_duration_ms").get<std::int64_t>();
      log.reference = node.at("reference").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      manifest_error(path, line_no, std::string("bad instance record: ") + e.what());
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

CorpusReport recompute_corpus(const std::vector<InstanceLog>& logs) {
  if (logs.empty()) return CorpusReport{};
  std::vector<LatencyReport> latencies;
  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  for (const InstanceLog& log : logs) {
    DelaySeries series;
    series.delays_ms.assign(log.delays_ms.begin(), log.delays_ms.end());
    series.elapsed_ms.assign(log.elapsed_ms.begin(), log.elapsed_ms.end());
    series.source_duration_ms = static_cast<double>(log.source_duration_ms);
    series.ref_len = reference_length(log.reference);
    latencies.push_back(latency_report(series));
    hyps.push_back(log.prediction);
    refs.push_back(log.reference);
  }
  return aggregate(latencies, hyps, refs);
}

}  // namespace simulst
