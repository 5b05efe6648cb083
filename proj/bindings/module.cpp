// Copyright (c) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//
// Python face of the streaming translation core: decision schedules, the
// hold-n truncation rule, conv length arithmetic, latency/BLEU metrics, and
// the whole-manifest evaluation entry point.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simulst/adapter.hpp"
#include "simulst/harness.hpp"
#include "simulst/metrics.hpp"
#include "simulst/policy.hpp"
#include "simulst/stream.hpp"

namespace py = pybind11;

namespace {

simulst::DelaySeries make_series(std::vector<double> delays, std::vector<double> elapsed,
                                 double source_duration_ms, int ref_len) {
  simulst::DelaySeries series;
  series.delays_ms = std::move(delays);
  series.elapsed_ms = std::move(elapsed);
  series.source_duration_ms = source_duration_ms;
  series.ref_len = ref_len;
  return series;
}

py::dict bleu_dict(const simulst::BleuReport& report) {
  py::dict out;
  out["score"] = report.score;
  out["precisions"] = std::vector<double>(report.precisions.begin(), report.precisions.end());
  out["brevity_penalty"] = report.brevity_penalty;
  out["hyp_tokens"] = report.hyp_tokens;
  out["ref_tokens"] = report.ref_tokens;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chunked streaming speech translation: hold-n policy, latency metrics, evaluation";

  m.def(
      "build_schedule",
      [](std::int64_t duration_ms, std::int64_t start_ms, std::int64_t chunk_ms) {
        return simulst::build_schedule(duration_ms, start_ms, chunk_ms).decision_times_ms;
      },
      py::arg("duration_ms"), py::arg("start_ms") = 2000, py::arg("chunk_ms") = 2500,
      "Decision times (ms): first at min(start_ms, duration_ms), then every chunk_ms, "
      "the last always exactly at duration_ms.");

  m.def("output_length", &simulst::output_length, py::arg("frames"), py::arg("kernel"),
        py::arg("stride"), py::arg("padding"),
        "Output row count of a strided 1-d convolution over `frames` input rows.");

  m.def(
      "selective_output",
      [](const std::vector<int>& hypothesis, int hold_n,
         bool source_finished) -> std::optional<std::vector<int>> {
        const simulst::SelectiveResult result =
            simulst::selective_output(hypothesis, hold_n, source_finished);
        if (result.kind == simulst::SelectiveResult::Kind::ReadMore) return std::nullopt;
        return result.prefix;
      },
      py::arg("hypothesis"), py::arg("hold_n"), py::arg("source_finished") = false,
      "Stable prefix the hold-n rule releases, or None when the policy should read more "
      "speech instead. Once the source has finished, the full hypothesis comes back.");

  m.def(
      "average_lagging",
      [](std::vector<double> delays_ms, double source_duration_ms, int ref_len) {
        return simulst::average_lagging(
            make_series(delays_ms, delays_ms, source_duration_ms, ref_len));
      },
      py::arg("delays_ms"), py::arg("source_duration_ms"), py::arg("ref_len"),
      "Average lagging in ms; None for an empty hypothesis.");

  m.def(
      "laal",
      [](std::vector<double> delays_ms, double source_duration_ms, int ref_len) {
        return simulst::laal(make_series(delays_ms, delays_ms, source_duration_ms, ref_len));
      },
      py::arg("delays_ms"), py::arg("source_duration_ms"), py::arg("ref_len"),
      "Length-adaptive average lagging in ms; None for an empty hypothesis.");

  m.def(
      "laal_ca",
      [](std::vector<double> delays_ms, std::vector<double> elapsed_ms,
         double source_duration_ms, int ref_len) {
        return simulst::laal_ca(
            make_series(std::move(delays_ms), std::move(elapsed_ms), source_duration_ms, ref_len));
      },
      py::arg("delays_ms"), py::arg("elapsed_ms"), py::arg("source_duration_ms"),
      py::arg("ref_len"), "Computation-aware LAAL in ms; None for an empty hypothesis.");

  m.def(
      "corpus_bleu",
      [](const std::vector<std::string>& hypotheses, const std::vector<std::string>& references) {
        return bleu_dict(simulst::corpus_bleu(hypotheses, references));
      },
      py::arg("hypotheses"), py::arg("references"),
      "Corpus BLEU as a dict: score, precisions, brevity_penalty, hyp_tokens, ref_tokens.");

  m.def(
      "run_manifest",
      [](const std::string& manifest, const std::string& out_dir, int start_ms, int chunk_ms,
         int hold_n, int beam, int max_len, const std::string& model, double compute_cost_ms,
         const std::vector<int>& sweep_hold_n) {
        simulst::PolicyConfig config;
        config.start_ms = start_ms;
        config.chunk_ms = chunk_ms;
        config.hold_n = hold_n;
        config.beam = beam;
        config.max_len = max_len;

        simulst::HarnessOptions options;
        if (model == "table") {
          options.model = simulst::ModelChoice::Table;
        } else if (model == "file") {
          options.model = simulst::ModelChoice::File;
        } else {
          throw std::invalid_argument("model must be 'table' or 'file', got '" + model + "'");
        }
        options.compute_cost_ms = compute_cost_ms;
        options.sweep_hold_n = sweep_hold_n;

        const simulst::EvalResult result =
            simulst::run_eval(simulst::load_manifest(manifest), config, options);
        if (!out_dir.empty()) simulst::write_outputs(result, out_dir);

        py::dict out;
        py::dict predictions;
        py::list delays;
        for (const simulst::InstanceLog& log : result.logs) {
          predictions[py::str(log.id)] = log.prediction;
          delays.append(std::vector<std::int64_t>(log.delays_ms));
        }
        py::list failures;
        for (const simulst::InstanceFailure& failure : result.report.failures) {
          py::dict f;
          f["id"] = failure.id;
          f["error"] = failure.error;
          failures.append(f);
        }
        out["instances"] = static_cast<int>(result.logs.size());
        out["predictions"] = predictions;
        out["delays_ms"] = delays;
        out["failures"] = failures;
        out["bleu"] = bleu_dict(result.report.corpus.bleu);
        const simulst::LatencyReport& mean = result.report.corpus.mean_latency;
        out["al_ms"] = mean.al_ms;
        out["laal_ms"] = mean.laal_ms;
        out["laal_ca_ms"] = mean.laal_ca_ms;
        return out;
      },
      py::arg("manifest"), py::arg("out_dir") = std::string(), py::arg("start_ms") = 2000,
      py::arg("chunk_ms") = 2500, py::arg("hold_n") = 7, py::arg("beam") = 4,
      py::arg("max_len") = 256, py::arg("model") = std::string("table"),
      py::arg("compute_cost_ms") = 0.0, py::arg("sweep_hold_n") = std::vector<int>{},
      "Evaluate a JSONL manifest; writes instances.jsonl/report.json/curve.tsv when "
      "out_dir is given and returns the corpus summary.");
}
