#include "sumtag/backend.h"

#include <future>
#include <thread>

#include "sumtag/unicode.h"

namespace sumtag {

PromptTemplate::PromptTemplate(std::string text,
                               std::optional<std::string> system_preamble)
    : text_(std::move(text)), system_preamble_(std::move(system_preamble)) {
  const auto first = text_.find(kPlaceholder);
  if (first == std::string::npos) {
    throw std::invalid_argument("prompt template lacks a {text} placeholder");
  }
  if (text_.find(kPlaceholder, first + kPlaceholder.size()) !=
      std::string::npos) {
    throw std::invalid_argument(
        "prompt template has more than one {text} placeholder");
  }
}

PromptTemplate PromptTemplate::default_summary() {
  return PromptTemplate(
      "Summarize the following text in one concise sentence.\n\n{text}",
      "You are a precise summarization assistant.");
}

std::string PromptTemplate::render(std::string_view body) const {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto hit = text_.find(kPlaceholder, pos);
    if (hit == std::string::npos) break;
    out.append(text_, pos, hit - pos);
    out.append(body);
    pos = hit + kPlaceholder.size();
  }
  out.append(text_, pos);
  return out;
}

void GenerationParams::validate() const {
  if (max_new_tokens < 1) {
    throw std::invalid_argument("max_new_tokens must be >= 1");
  }
  if (!(temperature >= 0.0)) {
    throw std::invalid_argument("temperature must be non-negative");
  }
  if (retries > kMaxRetries) {
    throw std::invalid_argument("retries must be <= 10");
  }
  if (timeout.count() <= 0) throw std::invalid_argument("timeout must be > 0");
  if (initial_backoff.count() < 0) {
    throw std::invalid_argument("initial backoff must be >= 0");
  }
}

std::string_view to_string(BackendErrorKind kind) {
  switch (kind) {
    case BackendErrorKind::kTransport:
      return "transport";
    case BackendErrorKind::kHttpStatus:
      return "http_status";
    case BackendErrorKind::kInvalidResponse:
      return "invalid_response";
    case BackendErrorKind::kEmptyGeneration:
      return "empty_generation";
    case BackendErrorKind::kInvalidInput:
      return "invalid_input";
  }
  return "unknown";
}

std::string trim(std::string_view text) {
  const std::u32string cps = unicode::decode(text);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && unicode::is_whitespace(cps[begin])) ++begin;
  while (end > begin && unicode::is_whitespace(cps[end - 1])) --end;
  return unicode::encode(std::u32string_view(cps).substr(begin, end - begin));
}

std::chrono::milliseconds backoff_delay(std::size_t retry_index,
                                        std::chrono::milliseconds initial) {
  const std::size_t shift = std::min<std::size_t>(retry_index, 20);
  return initial * (std::int64_t{1} << shift);
}

Generation generate_with_retry(Backend& backend,
                               const GenerationRequest& request,
                               const GenerationParams& params) {
  const Clock& clock = backend.clock();
  const std::size_t max_attempts = params.retries + 1;
  for (std::size_t attempt = 1;; ++attempt) {
    const Nanos start = clock.now();
    try {
      std::string text = trim(backend.generate(request, params));
      if (text.empty()) {
        throw BackendError(BackendErrorKind::kEmptyGeneration,
                           "backend '" + backend.name() +
                               "' returned an empty generation for document '" +
                               request.document_id + "'",
                           0, attempt);
      }
      return {std::move(text), clock.now() - start};
    } catch (const BackendError& e) {
      if (!e.retriable() || attempt >= max_attempts) {
        throw e.with_attempts(attempt);
      }
    }
    std::this_thread::sleep_for(backoff_delay(attempt - 1, params.initial_backoff));
  }
}

std::vector<GenerationOutcome> Backend::generate_batch(
    std::span<const GenerationRequest> requests,
    const GenerationParams& params) {
  std::vector<std::future<Generation>> inflight;
  inflight.reserve(requests.size());
  for (const auto& request : requests) {
    inflight.push_back(std::async(std::launch::async, [this, &request, &params] {
      return generate_with_retry(*this, request, params);
    }));
  }
  std::vector<GenerationOutcome> out;
  out.reserve(requests.size());
  for (auto& f : inflight) {
    try {
      out.emplace_back(f.get());
    } catch (const BackendError& e) {
      out.emplace_back(e);
    } catch (const std::exception& e) {
      out.emplace_back(BackendError(BackendErrorKind::kInvalidResponse, e.what()));
    }
  }
  return out;
}

namespace {

GenerationRequest make_request(const Document& document,
                               const PromptTemplate& prompt) {
  return {document.id, document.body, prompt.render(document.body),
          prompt.system_preamble()};
}

BackendError empty_body_error(const Document& document) {
  return BackendError(BackendErrorKind::kInvalidInput,
                      "document '" + document.id + "' has an empty body", 0, 0);
}

}  // namespace

SummaryResult summarize(const Document& document, const PromptTemplate& prompt,
                        const GenerationParams& params, Backend& backend) {
  if (trim(document.body).empty()) throw empty_body_error(document);
  const Generation g =
      generate_with_retry(backend, make_request(document, prompt), params);
  return {document.id, g.text, g.latency, backend.name()};
}

std::size_t BatchRun::failures() const {
  std::size_t n = 0;
  for (const auto& slot : slots) n += std::holds_alternative<BackendError>(slot);
  return n;
}

BatchRun summarize_batch(std::span<const Document> documents,
                         std::size_t batch_size, const PromptTemplate& prompt,
                         const GenerationParams& params, Backend& backend) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  const Clock& clock = backend.clock();
  const std::string backend_name = backend.name();

  BatchRun run;
  run.slots.reserve(documents.size());
  const Nanos run_start = clock.now();
  for (std::size_t begin = 0; begin < documents.size(); begin += batch_size) {
    const std::size_t end = std::min(begin + batch_size, documents.size());
    auto step = documents.subspan(begin, end - begin);

    // Documents with an empty body never reach the backend.
    std::vector<GenerationRequest> requests;
    std::vector<std::size_t> request_slot;
    for (std::size_t i = 0; i < step.size(); ++i) {
      if (!trim(step[i].body).empty()) {
        requests.push_back(make_request(step[i], prompt));
        request_slot.push_back(i);
      }
    }

    const Nanos step_start = clock.now();
    std::vector<GenerationOutcome> outcomes =
        requests.empty() ? std::vector<GenerationOutcome>{}
                         : backend.generate_batch(requests, params);
    const Nanos step_duration = clock.now() - step_start;
    if (outcomes.size() != requests.size()) {
      throw std::logic_error("backend '" + backend_name +
                             "' returned a batch of the wrong size");
    }

    std::vector<std::optional<SummarySlot>> step_slots(step.size());
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const Document& doc = step[request_slot[k]];
      if (auto* g = std::get_if<Generation>(&outcomes[k])) {
        step_slots[request_slot[k]] =
            SummaryResult{doc.id, g->text, g->latency, backend_name};
      } else {
        step_slots[request_slot[k]] = std::get<BackendError>(outcomes[k]);
      }
    }
    for (std::size_t i = 0; i < step.size(); ++i) {
      run.slots.push_back(step_slots[i] ? std::move(*step_slots[i])
                                        : SummarySlot(empty_body_error(step[i])));
    }
    run.timings.step_sizes.push_back(step.size());
    run.timings.step_durations.push_back(step_duration);
  }
  run.timings.total = clock.now() - run_start;
  return run;
}

}  // namespace sumtag
