#include "sumtag/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sumtag/http_backend.h"
#include "sumtag/mock_backends.h"

namespace sumtag {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

const json& section(const json& root, const char* key) {
  static const json kEmpty = json::object();
  auto it = root.find(key);
  if (it == root.end() || it->is_null()) return kEmpty;
  if (!it->is_object()) {
    throw ConfigError(std::string("config section '") + key +
                      "' must be an object");
  }
  return *it;
}

std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t consumed = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != text.size() || text.empty()) {
    throw ConfigError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> read_lexicon(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read lexicon " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    // Gazetteer files double as lexicons: keep the surface column.
    words.push_back(line.substr(0, line.find('\t')));
  }
  return words;
}

void require_file(const std::optional<fs::path>& path, const std::string& what) {
  if (!path) throw ConfigError(what + " is not configured");
  if (!fs::exists(*path)) {
    throw ConfigError(what + " does not exist: " + path->string());
  }
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

PromptTemplate RunConfig::prompt() const {
  try {
    return PromptTemplate(prompt_template, system_preamble);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

PipelineConfig RunConfig::pipeline_config() const {
  PipelineConfig pc;
  pc.rules = rules;
  pc.default_sink = default_sink;
  pc.failed_sink = failed_sink;
  pc.parallelism = parallelism;
  pc.prompt = prompt();
  pc.generation = generation;
  return pc;
}

RunConfig default_run_config() {
  RunConfig config;
  const PromptTemplate def = PromptTemplate::default_summary();
  config.prompt_template = def.text();
  config.system_preamble = def.system_preamble();
  return config;
}

RunConfig parse_run_config(const std::string& json_text,
                           const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig c = default_run_config();
  c.base_dir = base_dir;

  const json& backend = section(root, "backend");
  c.backend.kind = get_or<std::string>(backend, "kind", c.backend.kind);
  c.backend.base_url = get_or<std::string>(backend, "base_url", "");
  c.backend.model = get_or<std::string>(backend, "model", "");
  if (backend.contains("lexicon")) {
    c.backend.lexicon = resolve(base_dir, get_or<std::string>(backend, "lexicon", ""));
  }
  const json& latency = section(backend, "latency_model");
  c.backend.fixed_overhead = std::chrono::milliseconds(get_or<std::int64_t>(
      latency, "fixed_overhead_ms", c.backend.fixed_overhead.count()));
  c.backend.per_sample_cost = std::chrono::milliseconds(get_or<std::int64_t>(
      latency, "per_sample_ms", c.backend.per_sample_cost.count()));

  const json& gen = section(root, "generation");
  c.generation.max_new_tokens =
      get_or<std::size_t>(gen, "max_new_tokens", c.generation.max_new_tokens);
  c.generation.temperature = get_or<double>(gen, "temperature", c.generation.temperature);
  c.generation.timeout = std::chrono::milliseconds(
      get_or<std::int64_t>(gen, "timeout_ms", c.generation.timeout.count()));
  c.generation.retries = get_or<std::size_t>(gen, "retries", c.generation.retries);
  c.generation.initial_backoff = std::chrono::milliseconds(get_or<std::int64_t>(
      gen, "initial_backoff_ms", c.generation.initial_backoff.count()));

  const json& prompt = section(root, "prompt");
  c.prompt_template = get_or<std::string>(prompt, "template", c.prompt_template);
  if (prompt.contains("system")) {
    if (prompt["system"].is_null()) {
      c.system_preamble.reset();
    } else {
      c.system_preamble = get_or<std::string>(prompt, "system", "");
    }
  }

  const json& gaz = section(root, "gazetteer");
  if (gaz.contains("path")) {
    c.gazetteer = resolve(base_dir, get_or<std::string>(gaz, "path", ""));
  }
  c.case_sensitive = get_or<bool>(gaz, "case_sensitive", false);

  for (const auto& [name, value] : section(root, "sinks").items()) {
    if (!value.is_string()) {
      throw ConfigError("sink '" + name + "' must map to a file path");
    }
    c.sinks[name] = resolve(base_dir, value.get<std::string>());
  }

  const json& routing = section(root, "routing");
  c.default_sink = get_or<std::string>(routing, "default", c.default_sink);
  c.failed_sink = get_or<std::string>(routing, "failed", c.failed_sink);
  if (auto it = routing.find("rules"); it != routing.end()) {
    if (!it->is_array()) throw ConfigError("routing.rules must be an array");
    for (const auto& r : *it) {
      RoutingRule rule;
      rule.name = get_or<std::string>(r, "name", "");
      rule.destination = get_or<std::string>(r, "destination", "");
      for (const auto& l : get_or<std::vector<std::string>>(r, "labels", {})) {
        auto label = parse_label(l);
        if (!label) {
          throw ConfigError("rule '" + rule.name + "': unknown label '" + l + "'");
        }
        rule.required_labels.insert(*label);
      }
      c.rules.push_back(std::move(rule));
    }
  }

  c.parallelism = get_or<std::size_t>(root, "parallelism", c.parallelism);
  c.batch_size = get_or<std::size_t>(root, "batch_size", c.batch_size);
  if (root.contains("input")) {
    c.input = resolve(base_dir, get_or<std::string>(root, "input", ""));
  }

  const json& bench = section(root, "bench");
  c.bench_batch_sizes =
      get_or<std::vector<std::size_t>>(bench, "batch_sizes", c.bench_batch_sizes);
  c.warmup_steps = get_or<std::size_t>(bench, "warmup_steps", c.warmup_steps);
  if (bench.contains("workload")) {
    c.workload = resolve(base_dir, get_or<std::string>(bench, "workload", ""));
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.parent_path().empty()
                                            ? fs::path(".")
                                            : path.parent_path());
}

void apply_env(RunConfig& config, const EnvLookup& env) {
  if (auto v = env("SUMTAG_BACKEND_KIND")) config.backend.kind = *v;
  if (auto v = env("SUMTAG_BASE_URL")) config.backend.base_url = *v;
  if (auto v = env("SUMTAG_MODEL")) config.backend.model = *v;
  if (auto v = env(kApiKeyEnv)) config.backend.api_key = *v;
  if (auto v = env("SUMTAG_GAZETTEER")) config.gazetteer = fs::path(*v);
  if (auto v = env("SUMTAG_PARALLELISM")) {
    config.parallelism = parse_count(*v, "SUMTAG_PARALLELISM");
  }
}

void validate_run_config(const RunConfig& config, ConfigUse use) {
  const auto& b = config.backend;
  if (b.kind == "http") {
    if (b.base_url.empty()) throw ConfigError("backend.base_url is required for http");
    if (b.model.empty()) throw ConfigError("backend.model is required for http");
  } else if (b.kind == "mock-echo-keywords") {
    require_file(b.lexicon, "backend.lexicon");
  } else if (b.kind != "mock-first-sentence" && b.kind != "mock-latency-model") {
    throw ConfigError("unknown backend.kind '" + b.kind + "'");
  }
  try {
    config.generation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  config.prompt();
  if (config.batch_size == 0) throw ConfigError("batch_size must be >= 1");

  if (use == ConfigUse::kRun) {
    require_file(config.gazetteer, "gazetteer.path");
    require_file(config.input, "input");
    std::set<std::string> names;
    for (const auto& [name, path] : config.sinks) {
      names.insert(name);
      const fs::path parent =
          path.parent_path().empty() ? fs::path(".") : path.parent_path();
      if (!fs::is_directory(parent)) {
        throw ConfigError("directory for sink '" + name +
                          "' does not exist: " + parent.string());
      }
    }
    config.pipeline_config().validate(names);
  }
  if (use == ConfigUse::kBench) {
    require_file(config.workload, "bench.workload");
    if (config.bench_batch_sizes.empty()) {
      throw ConfigError("bench.batch_sizes is empty");
    }
    for (std::size_t i = 0; i < config.bench_batch_sizes.size(); ++i) {
      if (config.bench_batch_sizes[i] == 0 ||
          (i > 0 && config.bench_batch_sizes[i] <= config.bench_batch_sizes[i - 1])) {
        throw ConfigError("bench.batch_sizes must be positive and strictly increasing");
      }
    }
  }
}

std::unique_ptr<Backend> make_backend(const BackendSettings& settings) {
  if (settings.kind == "http") {
    try {
      return std::make_unique<HttpChatBackend>(
          HttpBackendConfig{settings.base_url, settings.model, settings.api_key});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (settings.kind == "mock-first-sentence") {
    return std::make_unique<FirstSentenceBackend>();
  }
  if (settings.kind == "mock-echo-keywords") {
    if (!settings.lexicon) throw ConfigError("backend.lexicon is required");
    return std::make_unique<EchoKeywordsBackend>(read_lexicon(*settings.lexicon));
  }
  if (settings.kind == "mock-latency-model") {
    return std::make_unique<LatencyModelBackend>(settings.fixed_overhead,
                                                 settings.per_sample_cost);
  }
  throw ConfigError("unknown backend.kind '" + settings.kind + "'");
}

}  // namespace sumtag
