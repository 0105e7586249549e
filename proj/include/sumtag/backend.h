#pragma once

// Summarization backends. A Backend turns one rendered prompt into generated
// text; summarize() adds retry, timing and result validation on top.

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sumtag/clock.h"
#include "sumtag/document.h"

namespace sumtag {

class PromptTemplate {
 public:
  static constexpr std::string_view kPlaceholder = "{text}";

  // Throws std::invalid_argument unless `text` contains exactly one
  // placeholder.
  explicit PromptTemplate(std::string text,
                          std::optional<std::string> system_preamble = {});

  static PromptTemplate default_summary();

  std::string render(std::string_view body) const;
  const std::string& text() const { return text_; }
  const std::optional<std::string>& system_preamble() const {
    return system_preamble_;
  }

 private:
  std::string text_;
  std::optional<std::string> system_preamble_;
};

struct GenerationParams {
  static constexpr std::size_t kMaxRetries = 10;

  std::size_t max_new_tokens = 128;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{30000};
  std::size_t retries = 2;
  // First retry waits this long; each later retry doubles it.
  std::chrono::milliseconds initial_backoff{250};

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

enum class BackendErrorKind {
  kTransport,        // retriable: connection failure, 408/429/5xx
  kHttpStatus,       // non-retriable non-2xx status
  kInvalidResponse,  // body did not have the expected shape
  kEmptyGeneration,  // model produced nothing usable
  kInvalidInput,     // document rejected before any request
};

std::string_view to_string(BackendErrorKind kind);

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, const std::string& message,
               int http_status = 0, std::size_t attempts = 1)
      : std::runtime_error(message),
        kind_(kind),
        http_status_(http_status),
        attempts_(attempts) {}

  BackendErrorKind kind() const { return kind_; }
  int http_status() const { return http_status_; }
  std::size_t attempts() const { return attempts_; }
  bool retriable() const { return kind_ == BackendErrorKind::kTransport; }

  BackendError with_attempts(std::size_t attempts) const {
    return BackendError(kind_, what(), http_status_, attempts);
  }

 private:
  BackendErrorKind kind_;
  int http_status_;
  std::size_t attempts_;
};

struct GenerationRequest {
  std::string document_id;
  std::string document_text;  // raw body; mocks work from this
  std::string prompt;         // rendered template; sent over the wire
  std::optional<std::string> system_preamble;
};

struct Generation {
  std::string text;
  Nanos latency{0};
};

using GenerationOutcome = std::variant<Generation, BackendError>;

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;

  // One attempt. Throws BackendError.
  virtual std::string generate(const GenerationRequest& request,
                               const GenerationParams& params) = 0;

  // Runs a batch with every request in flight at once; each request is
  // retried independently. Backends with native batching override this.
  virtual std::vector<GenerationOutcome> generate_batch(
      std::span<const GenerationRequest> requests,
      const GenerationParams& params);

  virtual const Clock& clock() const { return SteadyClock::instance(); }
};

// Calls backend.generate() up to params.retries + 1 times, backing off
// exponentially between retriable failures. Rejects empty output.
Generation generate_with_retry(Backend& backend,
                               const GenerationRequest& request,
                               const GenerationParams& params);

std::chrono::milliseconds backoff_delay(std::size_t retry_index,
                                        std::chrono::milliseconds initial);

struct SummaryResult {
  std::string document_id;
  std::string summary_text;
  Nanos latency{0};
  std::string backend_name;
};

// Throws BackendError (kInvalidInput for an empty body).
SummaryResult summarize(const Document& document,
                        const PromptTemplate& prompt,
                        const GenerationParams& params, Backend& backend);

using SummarySlot = std::variant<SummaryResult, BackendError>;

struct BatchTimings {
  std::vector<std::size_t> step_sizes;
  std::vector<Nanos> step_durations;
  Nanos total{0};
};

struct BatchRun {
  std::vector<SummarySlot> slots;  // slots[i] belongs to documents[i]
  BatchTimings timings;

  std::size_t failures() const;
};

// Consecutive steps of at most batch_size documents; steps run sequentially.
BatchRun summarize_batch(std::span<const Document> documents,
                         std::size_t batch_size, const PromptTemplate& prompt,
                         const GenerationParams& params, Backend& backend);

// Trims surrounding Unicode whitespace.
std::string trim(std::string_view text);

}  // namespace sumtag
