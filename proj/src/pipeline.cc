#include "sumtag/pipeline.h"

#include <algorithm>
#include <sstream>
#include <thread>

#include "sumtag/unicode.h"

namespace sumtag {

using json = nlohmann::json;

DocumentOutcome process_document(const Document& doc, Backend& backend,
                                 const PromptTemplate& prompt,
                                 const GenerationParams& params,
                                 const Gazetteer& gazetteer) {
  SummaryResult summary;
  try {
    summary = summarize(doc, prompt, params, backend);
  } catch (const BackendError& e) {
    return FailedDocument{doc.id, "summarize", std::string(to_string(e.kind())),
                          e.what()};
  }
  const Clock& clock = backend.clock();
  const Nanos tag_start = clock.now();
  TaggedText tagged = tag_entities(summary.summary_text, gazetteer);
  const Nanos tag_latency = clock.now() - tag_start;

  TaggedSummary out;
  out.document_id = doc.id;
  out.summary = std::move(summary.summary_text);
  out.topic_tags = tagged.tags;
  out.tagged = std::move(tagged);
  out.latency = summary.latency + tag_latency;
  out.source = doc.source;
  return out;
}

std::set<std::string> route(const TaggedSummary& summary,
                            const std::vector<RoutingRule>& rules,
                            const std::string& default_sink) {
  std::set<std::string> destinations;
  for (const auto& rule : rules) {
    if (std::includes(summary.topic_tags.begin(), summary.topic_tags.end(),
                      rule.required_labels.begin(), rule.required_labels.end())) {
      destinations.insert(rule.destination);
    }
  }
  if (destinations.empty()) destinations.insert(default_sink);
  return destinations;
}

json to_json(const EntitySpan& span) {
  return {{"start", span.start},
          {"end", span.end},
          {"label", to_string(span.label)},
          {"surface", span.surface}};
}

json to_json(const TaggedSummary& summary) {
  json spans = json::array();
  for (const auto& s : summary.tagged.spans) spans.push_back(to_json(s));
  json tags = json::array();
  for (EntityLabel l : summary.topic_tags) tags.push_back(to_string(l));
  json record = {
      {"document_id", summary.document_id},
      {"summary", summary.summary},
      {"bracketed", render_bracketed(summary.tagged)},
      {"spans", std::move(spans)},
      {"topic_tags", std::move(tags)},
      {"latency_ms", to_seconds(summary.latency) * 1000.0},
  };
  if (summary.source) record["source"] = *summary.source;
  return record;
}

json to_json(const FailedDocument& failed) {
  return {{"document_id", failed.document_id},
          {"stage", failed.stage},
          {"error_kind", failed.error_kind},
          {"error", failed.cause}};
}

json to_json(const RunStats& stats) {
  json j = {{"ingested", stats.ingested},
            {"delivered", stats.delivered},
            {"defaulted", stats.defaulted},
            {"failed", stats.failed}};
  if (stats.source_error) j["source_error"] = *stats.source_error;
  return j;
}

// ---- sources --------------------------------------------------------------

std::optional<Document> VectorSource::next() {
  if (pos_ >= docs_.size()) return std::nullopt;
  return docs_[pos_++];
}

Document parse_document_record(const json& record) {
  if (!record.is_object()) throw SourceError("document record is not an object");
  auto text_field = [&](const char* key, bool required) -> std::optional<std::string> {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) {
      if (required) throw SourceError(std::string("missing \"") + key + "\"");
      return std::nullopt;
    }
    if (!it->is_string()) {
      throw SourceError(std::string("\"") + key + "\" is not a string");
    }
    return it->get<std::string>();
  };
  Document doc;
  doc.id = *text_field("id", true);
  doc.body = *text_field("body", true);
  if (auto hint = text_field("language_hint", false)) {
    auto parsed = parse_language_hint(*hint);
    if (!parsed) throw SourceError("unknown language_hint '" + *hint + "'");
    doc.language_hint = *parsed;
  }
  doc.source = text_field("source", false);
  return doc;
}

JsonlDocumentSource::JsonlDocumentSource(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw SourceError("cannot open document file " + path.string());
}

std::optional<Document> JsonlDocumentSource::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    try {
      return parse_document_record(json::parse(line));
    } catch (const json::exception& e) {
      throw SourceError(path_.string() + ":" + std::to_string(line_no_) + ": " +
                        e.what());
    } catch (const SourceError& e) {
      throw SourceError(path_.string() + ":" + std::to_string(line_no_) + ": " +
                        e.what());
    }
  }
  if (in_.bad()) throw SourceError("read error on " + path_.string());
  return std::nullopt;
}

DirectoryDocumentSource::DirectoryDocumentSource(const std::filesystem::path& dir) {
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) files_.push_back(entry.path());
  }
  if (ec) throw SourceError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files_.begin(), files_.end());
}

std::optional<Document> DirectoryDocumentSource::next() {
  if (pos_ >= files_.size()) return std::nullopt;
  const auto& path = files_[pos_++];
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SourceError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Document doc;
  doc.id = path.filename().string();
  doc.body = buffer.str();
  doc.source = path.string();
  return doc;
}

std::vector<Document> read_all(DocumentSource& source) {
  std::vector<Document> docs;
  while (auto doc = source.next()) docs.push_back(std::move(*doc));
  return docs;
}

std::unique_ptr<DocumentSource> open_document_source(
    const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    return std::make_unique<DirectoryDocumentSource>(path);
  }
  return std::make_unique<JsonlDocumentSource>(path);
}

// ---- sinks ----------------------------------------------------------------

JsonlFileSink::JsonlFileSink(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw std::runtime_error("cannot open sink file " + path.string());
}

void JsonlFileSink::write(const json& record) {
  const std::string line = record.dump() + '\n';
  std::lock_guard lock(mu_);
  out_ << line;
  out_.flush();
  if (!out_) throw std::runtime_error("write to " + path_.string() + " failed");
}

void MemorySink::write(const json& record) {
  std::lock_guard lock(mu_);
  records_.push_back(record);
}

std::vector<json> MemorySink::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

// ---- run ------------------------------------------------------------------

void PipelineConfig::validate(const std::set<std::string>& sink_names) const {
  auto require = [&](const std::string& name, const std::string& what) {
    if (!sink_names.count(name)) {
      throw ConfigError(what + " names unknown sink '" + name + "'");
    }
  };
  for (const auto& rule : rules) {
    if (rule.required_labels.empty()) {
      throw ConfigError("rule '" + rule.name + "' has no required labels");
    }
    require(rule.destination, "rule '" + rule.name + "'");
  }
  require(default_sink, "default route");
  require(failed_sink, "failed route");
  if (parallelism == 0) throw ConfigError("parallelism must be >= 1");
  try {
    generation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

class RunState {
 public:
  RunState(DocumentSource& source, const SinkMap& sinks, Backend& backend,
           const Gazetteer& gazetteer, const PipelineConfig& config)
      : source_(source),
        sinks_(sinks),
        backend_(backend),
        gazetteer_(gazetteer),
        config_(config) {}

  void worker() {
    while (auto doc = take()) handle(*doc);
  }

  RunStats finish() {
    RunStats stats;
    stats.ingested = ingested_.load();
    stats.delivered = delivered_.load();
    stats.defaulted = defaulted_.load();
    stats.failed = failed_.load();
    std::lock_guard lock(mu_);
    stats.source_error = source_error_;
    stats.failures = failures_;
    return stats;
  }

 private:
  std::optional<Document> take() {
    std::lock_guard lock(mu_);
    if (source_error_) return std::nullopt;
    try {
      auto doc = source_.next();
      if (doc) ++ingested_;
      return doc;
    } catch (const std::exception& e) {
      source_error_ = e.what();
      return std::nullopt;
    }
  }

  bool claim_id(const std::string& id) {
    std::lock_guard lock(mu_);
    return seen_ids_.insert(id).second;
  }

  void fail(FailedDocument failed) {
    ++failed_;
    try {
      sinks_.at(config_.failed_sink)->write(to_json(failed));
    } catch (const std::exception&) {
      // Still counted; the cause stays in RunStats::failures.
    }
    std::lock_guard lock(mu_);
    failures_.push_back(std::move(failed));
  }

  void handle(const Document& doc) {
    if (doc.id.empty()) {
      fail({doc.id, "ingest", "invalid_input", "document id is empty"});
      return;
    }
    if (!claim_id(doc.id)) {
      fail({doc.id, "ingest", "invalid_input", "duplicate document id"});
      return;
    }
    DocumentOutcome outcome = process_document(
        doc, backend_, config_.prompt, config_.generation, gazetteer_);
    if (auto* failed = std::get_if<FailedDocument>(&outcome)) {
      fail(std::move(*failed));
      return;
    }
    const auto& summary = std::get<TaggedSummary>(outcome);
    const std::set<std::string> destinations =
        route(summary, config_.rules, config_.default_sink);
    const bool defaulted = !any_rule_fires(summary);
    json record = to_json(summary);
    record["destinations"] = destinations;
    for (const auto& name : destinations) {
      try {
        sinks_.at(name)->write(record);
      } catch (const std::exception& e) {
        fail({doc.id, "sink", "sink_write", "sink '" + name + "': " + e.what()});
        return;
      }
    }
    ++(defaulted ? defaulted_ : delivered_);
  }

  bool any_rule_fires(const TaggedSummary& summary) const {
    for (const auto& rule : config_.rules) {
      if (std::includes(summary.topic_tags.begin(), summary.topic_tags.end(),
                        rule.required_labels.begin(),
                        rule.required_labels.end())) {
        return true;
      }
    }
    return false;
  }

  DocumentSource& source_;
  const SinkMap& sinks_;
  Backend& backend_;
  const Gazetteer& gazetteer_;
  const PipelineConfig& config_;

  std::mutex mu_;
  std::set<std::string> seen_ids_;
  std::optional<std::string> source_error_;
  std::vector<FailedDocument> failures_;
  std::atomic<std::size_t> ingested_{0};
  std::atomic<std::size_t> delivered_{0};
  std::atomic<std::size_t> defaulted_{0};
  std::atomic<std::size_t> failed_{0};
};

}  // namespace

RunStats run_pipeline(DocumentSource& source, const SinkMap& sinks,
                      Backend& backend, const Gazetteer& gazetteer,
                      const PipelineConfig& config) {
  std::set<std::string> names;
  for (const auto& [name, sink] : sinks) {
    if (sink == nullptr) throw ConfigError("sink '" + name + "' is null");
    names.insert(name);
  }
  config.validate(names);

  RunState state(source, sinks, backend, gazetteer, config);
  if (config.parallelism == 1) {
    state.worker();
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(config.parallelism);
    for (std::size_t i = 0; i < config.parallelism; ++i) {
      workers.emplace_back([&state] { state.worker(); });
    }
  }
  return state.finish();
}

}  // namespace sumtag
