#include "sumtag/bench.h"

#include <sstream>
#include <stdexcept>

namespace sumtag {

using json = nlohmann::json;

Rates derive_rates(std::size_t total_samples, std::size_t total_steps,
                   Nanos elapsed) {
  if (elapsed.count() <= 0) {
    throw std::invalid_argument("elapsed time must be positive");
  }
  const double seconds = to_seconds(elapsed);
  return {static_cast<double>(total_samples) / seconds,
          static_cast<double>(total_steps) / seconds};
}

BenchmarkSweep run_benchmark(Backend& backend,
                             const std::vector<Document>& workload,
                             const BenchmarkOptions& options) {
  const auto& sizes = options.batch_sizes;
  if (sizes.empty()) throw std::invalid_argument("no batch sizes to sweep");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw std::invalid_argument("batch size must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("batch sizes must be strictly increasing");
    }
  }
  if (workload.size() < sizes.back()) {
    throw std::invalid_argument("workload has " + std::to_string(workload.size()) +
                                " documents, fewer than the largest batch size " +
                                std::to_string(sizes.back()));
  }

  BenchmarkSweep sweep;
  sweep.backend_name = backend.name();
  sweep.config = {{"batch_sizes", sizes},
                  {"warmup_steps", options.warmup_steps},
                  {"workload_size", workload.size()},
                  {"max_new_tokens", options.generation.max_new_tokens},
                  {"temperature", options.generation.temperature}};

  const Clock& clock = backend.clock();
  const std::span<const Document> all(workload);

  for (std::size_t batch : sizes) {
    for (std::size_t step = 0; step < options.warmup_steps; ++step) {
      const std::size_t begin = (step * batch) % workload.size();
      const std::size_t count = std::min(batch, workload.size() - begin);
      summarize_batch(all.subspan(begin, count), batch, options.prompt,
                      options.generation, backend);
    }

    const Nanos start = clock.now();
    BatchRun run = summarize_batch(all, batch, options.prompt,
                                   options.generation, backend);
    const Nanos elapsed = clock.now() - start;

    if (run.failures() > 0) {
      for (const auto& slot : run.slots) {
        if (const auto* e = std::get_if<BackendError>(&slot)) {
          sweep.complete = false;
          sweep.error = "batch size " + std::to_string(batch) + ": " + e->what();
          return sweep;
        }
      }
    }

    BenchmarkPoint point;
    point.batch_size = batch;
    point.total_samples = workload.size();
    point.total_steps = run.timings.step_sizes.size();
    point.elapsed = elapsed;
    try {
      const Rates rates = derive_rates(point.total_samples, point.total_steps, elapsed);
      point.samples_per_sec = rates.samples_per_sec;
      point.steps_per_sec = rates.steps_per_sec;
    } catch (const std::invalid_argument& e) {
      sweep.complete = false;
      sweep.error = "batch size " + std::to_string(batch) + ": " + e.what();
      return sweep;
    }
    sweep.points.push_back(point);
  }
  return sweep;
}

json to_json(const BenchmarkPoint& point) {
  return {{"batch_size", point.batch_size},
          {"total_samples", point.total_samples},
          {"total_steps", point.total_steps},
          {"elapsed_s", to_seconds(point.elapsed)},
          {"samples_per_sec", point.samples_per_sec},
          {"steps_per_sec", point.steps_per_sec},
          {"operating_point", point.batch_size == kOperatingBatchSize}};
}

std::string sweep_to_jsonl(const BenchmarkSweep& sweep) {
  std::ostringstream out;
  json header = {{"type", "sweep"},
                 {"backend", sweep.backend_name},
                 {"complete", sweep.complete},
                 {"config", sweep.config}};
  if (sweep.error) header["error"] = *sweep.error;
  out << header.dump() << '\n';
  for (const auto& p : sweep.points) {
    json line = to_json(p);
    line["type"] = "point";
    out << line.dump() << '\n';
  }
  return out.str();
}

std::string sweep_plot_data(const BenchmarkSweep& sweep) {
  std::ostringstream out;
  out.precision(12);
  out << "# batch_size samples_per_sec\n";
  for (const auto& p : sweep.points) {
    out << p.batch_size << ' ' << p.samples_per_sec << '\n';
  }
  out << "\n\n# batch_size steps_per_sec\n";
  for (const auto& p : sweep.points) {
    out << p.batch_size << ' ' << p.steps_per_sec << '\n';
  }
  return out.str();
}

}  // namespace sumtag
