#pragma once

// Throughput/latency sweep over batch sizes: prediction samples per second
// and prediction steps per second, each step being one batch.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sumtag/backend.h"

namespace sumtag {

struct Rates {
  double samples_per_sec = 0.0;
  double steps_per_sec = 0.0;
};

// Throws std::invalid_argument when elapsed is not positive.
Rates derive_rates(std::size_t total_samples, std::size_t total_steps,
                   Nanos elapsed);

struct BenchmarkPoint {
  std::size_t batch_size = 0;
  std::size_t total_samples = 0;
  std::size_t total_steps = 0;
  Nanos elapsed{0};
  double samples_per_sec = 0.0;
  double steps_per_sec = 0.0;
};

struct BenchmarkSweep {
  std::vector<BenchmarkPoint> points;  // increasing batch size
  std::string backend_name;
  nlohmann::json config;
  bool complete = true;
  std::optional<std::string> error;  // why the sweep stopped early
};

inline constexpr std::size_t kDefaultBatchSizes[] = {1, 2, 4, 8, 16, 32};
inline constexpr std::size_t kOperatingBatchSize = 16;

struct BenchmarkOptions {
  std::vector<std::size_t> batch_sizes{std::begin(kDefaultBatchSizes),
                                       std::end(kDefaultBatchSizes)};
  std::size_t warmup_steps = 1;
  PromptTemplate prompt = PromptTemplate::default_summary();
  GenerationParams generation;
};

// For each batch size: warmup steps (untimed), then the whole workload via
// summarize_batch timed on backend.clock(). A failing document stops the
// sweep; points measured so far are kept and the sweep is marked incomplete.
// Throws std::invalid_argument on an empty or non-increasing batch size
// list, or a workload smaller than the largest batch.
BenchmarkSweep run_benchmark(Backend& backend,
                             const std::vector<Document>& workload,
                             const BenchmarkOptions& options);

nlohmann::json to_json(const BenchmarkPoint& point);

// First line describes the sweep, then one line per point.
std::string sweep_to_jsonl(const BenchmarkSweep& sweep);

// Two gnuplot data blocks, "batch_size samples_per_sec" and
// "batch_size steps_per_sec".
std::string sweep_plot_data(const BenchmarkSweep& sweep);

}  // namespace sumtag
