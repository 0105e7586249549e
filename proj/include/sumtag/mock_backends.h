#pragma once

// Deterministic backends for tests, demos and the benchmark harness.

#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sumtag/backend.h"

namespace sumtag {

// Sentence ends at '.', '!' or '?' followed by whitespace or end of text, or
// at a full-width '。', '！', '？'. Returns the trimmed first sentence.
std::string first_sentence(std::string_view text);

// Extractive: returns the first sentence of the document body. An optional
// per-call delay (real time) stands in for model latency.
class FirstSentenceBackend : public Backend {
 public:
  explicit FirstSentenceBackend(Nanos per_call_delay = Nanos{0})
      : per_call_delay_(per_call_delay) {}

  std::string name() const override { return "mock-first-sentence"; }
  std::string generate(const GenerationRequest& request,
                       const GenerationParams& params) override;

 private:
  Nanos per_call_delay_;
};

// Returns the lexicon entries found in the document body, in order of first
// occurrence, separated by single spaces. Empty when nothing matches.
class EchoKeywordsBackend : public Backend {
 public:
  explicit EchoKeywordsBackend(std::vector<std::string> lexicon);

  std::string name() const override { return "mock-echo-keywords"; }
  std::string generate(const GenerationRequest& request,
                       const GenerationParams& params) override;

 private:
  std::vector<std::string> lexicon_;
};

// Simulated server: a batch of b requests takes
//   fixed_overhead + per_sample_cost * b
// of virtual time on its own clock. Output is the first sentence.
class LatencyModelBackend : public Backend {
 public:
  LatencyModelBackend(Nanos fixed_overhead, Nanos per_sample_cost);

  std::string name() const override { return "mock-latency-model"; }
  std::string generate(const GenerationRequest& request,
                       const GenerationParams& params) override;
  std::vector<GenerationOutcome> generate_batch(
      std::span<const GenerationRequest> requests,
      const GenerationParams& params) override;
  const Clock& clock() const override { return clock_; }

  Nanos step_duration(std::size_t batch_size) const {
    return fixed_overhead_ + per_sample_cost_ * static_cast<Nanos::rep>(batch_size);
  }
  Nanos fixed_overhead() const { return fixed_overhead_; }
  Nanos per_sample_cost() const { return per_sample_cost_; }

 private:
  Nanos fixed_overhead_;
  Nanos per_sample_cost_;
  SimulatedClock clock_;
};

// Wraps another backend and fails the requests selected by `should_fail`
// (keyed on document id) with a non-retriable error. Other requests pass
// through, including the inner backend's batch behaviour and clock.
class FaultInjectingBackend : public Backend {
 public:
  using Predicate = std::function<bool(const std::string& document_id)>;

  FaultInjectingBackend(Backend& inner, Predicate should_fail,
                        BackendErrorKind kind = BackendErrorKind::kHttpStatus);

  static FaultInjectingBackend failing_ids(Backend& inner,
                                           std::set<std::string> ids);

  std::string name() const override { return inner_.name(); }
  std::string generate(const GenerationRequest& request,
                       const GenerationParams& params) override;
  std::vector<GenerationOutcome> generate_batch(
      std::span<const GenerationRequest> requests,
      const GenerationParams& params) override;
  const Clock& clock() const override { return inner_.clock(); }

 private:
  BackendError injected(const std::string& id) const;

  Backend& inner_;
  Predicate should_fail_;
  BackendErrorKind kind_;
};

}  // namespace sumtag
