#pragma once

// Run configuration: a JSON config file, overridden by SUMTAG_* environment
// variables, overridden by command-line flags.

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sumtag/backend.h"
#include "sumtag/bench.h"
#include "sumtag/pipeline.h"

namespace sumtag {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
EnvLookup process_env();

inline constexpr const char* kConfigEnv = "SUMTAG_CONFIG";

struct BackendSettings {
  std::string kind = "mock-first-sentence";  // http | mock-first-sentence |
                                             // mock-echo-keywords |
                                             // mock-latency-model
  std::string base_url;
  std::string model;
  std::optional<std::string> api_key;
  std::optional<std::filesystem::path> lexicon;  // mock-echo-keywords
  std::chrono::milliseconds fixed_overhead{4000};  // mock-latency-model
  std::chrono::milliseconds per_sample_cost{1000};
};

struct RunConfig {
  std::filesystem::path base_dir = ".";  // relative paths resolve here
  BackendSettings backend;
  GenerationParams generation;
  std::string prompt_template;
  std::optional<std::string> system_preamble;
  std::optional<std::filesystem::path> gazetteer;
  bool case_sensitive = false;
  std::map<std::string, std::filesystem::path> sinks;
  std::vector<RoutingRule> rules;
  std::string default_sink = "default";
  std::string failed_sink = "failed";
  std::size_t parallelism = 1;
  std::size_t batch_size = kOperatingBatchSize;
  std::optional<std::filesystem::path> input;
  std::vector<std::size_t> bench_batch_sizes{std::begin(kDefaultBatchSizes),
                                             std::end(kDefaultBatchSizes)};
  std::size_t warmup_steps = 1;
  std::optional<std::filesystem::path> workload;

  PromptTemplate prompt() const;
  PipelineConfig pipeline_config() const;
};

RunConfig default_run_config();

// Parses the JSON config text; `base_dir` anchors relative paths. Throws
// ConfigError.
RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// SUMTAG_BACKEND_KIND, SUMTAG_BASE_URL, SUMTAG_MODEL, SUMTAG_API_KEY,
// SUMTAG_GAZETTEER, SUMTAG_PARALLELISM.
void apply_env(RunConfig& config, const EnvLookup& env);

enum class ConfigUse { kSummarize, kRun, kBench };

// Checks referenced paths and sink names for the given command. Throws
// ConfigError.
void validate_run_config(const RunConfig& config, ConfigUse use);

// Throws ConfigError for an unknown kind or bad settings.
std::unique_ptr<Backend> make_backend(const BackendSettings& settings);

}  // namespace sumtag
