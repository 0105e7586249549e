#include "sumtag/mock_backends.h"

#include <algorithm>
#include <thread>

#include "sumtag/unicode.h"

namespace sumtag {

std::string first_sentence(std::string_view text) {
  const std::u32string cps = unicode::decode(text);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    const bool ascii_end = c == U'.' || c == U'!' || c == U'?';
    const bool fullwidth_end = c == U'。' || c == U'！' || c == U'？';
    if (fullwidth_end ||
        (ascii_end && (i + 1 == cps.size() || unicode::is_whitespace(cps[i + 1])))) {
      return trim(unicode::encode(std::u32string_view(cps).substr(0, i + 1)));
    }
  }
  return trim(text);
}

std::string FirstSentenceBackend::generate(const GenerationRequest& request,
                                           const GenerationParams&) {
  if (per_call_delay_.count() > 0) std::this_thread::sleep_for(per_call_delay_);
  return first_sentence(request.document_text);
}

EchoKeywordsBackend::EchoKeywordsBackend(std::vector<std::string> lexicon)
    : lexicon_(std::move(lexicon)) {
  std::erase_if(lexicon_, [](const std::string& s) { return s.empty(); });
}

std::string EchoKeywordsBackend::generate(const GenerationRequest& request,
                                          const GenerationParams&) {
  const std::string& body = request.document_text;
  std::vector<std::pair<std::size_t, const std::string*>> hits;
  for (const auto& word : lexicon_) {
    const auto pos = body.find(word);
    if (pos != std::string::npos) hits.emplace_back(pos, &word);
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [pos, word] : hits) {
    if (!out.empty()) out += ' ';
    out += *word;
  }
  return out;
}

LatencyModelBackend::LatencyModelBackend(Nanos fixed_overhead,
                                         Nanos per_sample_cost)
    : fixed_overhead_(fixed_overhead), per_sample_cost_(per_sample_cost) {
  if (fixed_overhead.count() < 0 || per_sample_cost.count() < 0) {
    throw std::invalid_argument("latency model constants must be >= 0");
  }
}

std::string LatencyModelBackend::generate(const GenerationRequest& request,
                                          const GenerationParams&) {
  clock_.advance(step_duration(1));
  return first_sentence(request.document_text);
}

std::vector<GenerationOutcome> LatencyModelBackend::generate_batch(
    std::span<const GenerationRequest> requests, const GenerationParams&) {
  const Nanos step = step_duration(requests.size());
  clock_.advance(step);
  std::vector<GenerationOutcome> out;
  out.reserve(requests.size());
  for (const auto& request : requests) {
    std::string text = first_sentence(request.document_text);
    if (text.empty()) {
      out.emplace_back(BackendError(BackendErrorKind::kEmptyGeneration,
                                    "empty generation for document '" +
                                        request.document_id + "'"));
    } else {
      out.emplace_back(Generation{std::move(text), step});
    }
  }
  return out;
}

FaultInjectingBackend::FaultInjectingBackend(Backend& inner,
                                             Predicate should_fail,
                                             BackendErrorKind kind)
    : inner_(inner), should_fail_(std::move(should_fail)), kind_(kind) {}

FaultInjectingBackend FaultInjectingBackend::failing_ids(
    Backend& inner, std::set<std::string> ids) {
  return FaultInjectingBackend(
      inner, [ids = std::move(ids)](const std::string& id) {
        return ids.count(id) > 0;
      });
}

BackendError FaultInjectingBackend::injected(const std::string& id) const {
  return BackendError(kind_, "injected failure for document '" + id + "'",
                      kind_ == BackendErrorKind::kHttpStatus ||
                              kind_ == BackendErrorKind::kTransport
                          ? 500
                          : 0);
}

std::string FaultInjectingBackend::generate(const GenerationRequest& request,
                                            const GenerationParams& params) {
  if (should_fail_(request.document_id)) throw injected(request.document_id);
  return inner_.generate(request, params);
}

std::vector<GenerationOutcome> FaultInjectingBackend::generate_batch(
    std::span<const GenerationRequest> requests,
    const GenerationParams& params) {
  std::vector<GenerationOutcome> out = inner_.generate_batch(requests, params);
  for (std::size_t i = 0; i < requests.size() && i < out.size(); ++i) {
    if (should_fail_(requests[i].document_id)) {
      out[i] = injected(requests[i].document_id);
    }
  }
  return out;
}

}  // namespace sumtag
