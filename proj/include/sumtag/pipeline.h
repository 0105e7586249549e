#pragma once

// Ingest -> summarize -> tag -> route -> persist.

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sumtag/backend.h"
#include "sumtag/document.h"
#include "sumtag/ner.h"

namespace sumtag {

struct TaggedSummary {
  std::string document_id;
  std::string summary;
  TaggedText tagged;  // over the summary
  LabelSet topic_tags;
  Nanos latency{0};
  std::optional<std::string> source;
};

struct FailedDocument {
  std::string document_id;
  std::string stage;  // "ingest", "summarize" or "sink"
  std::string error_kind;
  std::string cause;
};

using DocumentOutcome = std::variant<TaggedSummary, FailedDocument>;

struct RoutingRule {
  std::string name;
  LabelSet required_labels;
  std::string destination;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Summarizes, then tags the summary. Never throws for backend failures.
DocumentOutcome process_document(const Document& doc, Backend& backend,
                                 const PromptTemplate& prompt,
                                 const GenerationParams& params,
                                 const Gazetteer& gazetteer);

// Union of the destinations of every rule whose labels are all present;
// {default_sink} when none fire.
std::set<std::string> route(const TaggedSummary& summary,
                            const std::vector<RoutingRule>& rules,
                            const std::string& default_sink);

nlohmann::json to_json(const TaggedSummary& summary);
nlohmann::json to_json(const FailedDocument& failed);
nlohmann::json to_json(const EntitySpan& span);

// ---- sources --------------------------------------------------------------

class SourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DocumentSource {
 public:
  virtual ~DocumentSource() = default;
  // std::nullopt at end of stream. Throws SourceError on a read failure.
  virtual std::optional<Document> next() = 0;
};

class VectorSource : public DocumentSource {
 public:
  explicit VectorSource(std::vector<Document> docs) : docs_(std::move(docs)) {}
  std::optional<Document> next() override;

 private:
  std::vector<Document> docs_;
  std::size_t pos_ = 0;
};

// One JSON object per line: id, body, optional language_hint and source.
// Blank lines are skipped; a malformed line raises SourceError.
class JsonlDocumentSource : public DocumentSource {
 public:
  explicit JsonlDocumentSource(const std::filesystem::path& path);
  std::optional<Document> next() override;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

// Every regular file in the directory, sorted by name; id = file name.
class DirectoryDocumentSource : public DocumentSource {
 public:
  explicit DirectoryDocumentSource(const std::filesystem::path& dir);
  std::optional<Document> next() override;

 private:
  std::vector<std::filesystem::path> files_;
  std::size_t pos_ = 0;
};

Document parse_document_record(const nlohmann::json& record);
std::vector<Document> read_all(DocumentSource& source);
// Picks JsonlDocumentSource or DirectoryDocumentSource from the path type.
std::unique_ptr<DocumentSource> open_document_source(
    const std::filesystem::path& path);

// ---- sinks ----------------------------------------------------------------

class Sink {
 public:
  virtual ~Sink() = default;
  // Appends one record. Throws std::runtime_error on failure. Calls are
  // serialized per sink.
  virtual void write(const nlohmann::json& record) = 0;
};

// Appends one JSON object per line and flushes after each record.
class JsonlFileSink : public Sink {
 public:
  explicit JsonlFileSink(const std::filesystem::path& path);
  void write(const nlohmann::json& record) override;

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::ofstream out_;
};

class MemorySink : public Sink {
 public:
  void write(const nlohmann::json& record) override;
  std::vector<nlohmann::json> records() const;

 private:
  mutable std::mutex mu_;
  std::vector<nlohmann::json> records_;
};

using SinkMap = std::map<std::string, Sink*>;

// ---- run ------------------------------------------------------------------

struct PipelineConfig {
  std::vector<RoutingRule> rules;
  std::string default_sink = "default";
  std::string failed_sink = "failed";
  std::size_t parallelism = 1;
  PromptTemplate prompt = PromptTemplate::default_summary();
  GenerationParams generation;

  // Throws ConfigError if a rule has no labels or any sink name is unknown.
  void validate(const std::set<std::string>& sink_names) const;
};

struct RunStats {
  std::size_t ingested = 0;
  std::size_t delivered = 0;
  std::size_t defaulted = 0;
  std::size_t failed = 0;
  std::optional<std::string> source_error;  // set when reading aborted
  std::vector<FailedDocument> failures;

  bool conserved() const { return ingested == delivered + defaulted + failed; }
};

nlohmann::json to_json(const RunStats& stats);

RunStats run_pipeline(DocumentSource& source, const SinkMap& sinks,
                      Backend& backend, const Gazetteer& gazetteer,
                      const PipelineConfig& config);

}  // namespace sumtag
