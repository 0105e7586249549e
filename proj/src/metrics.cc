#include "sumtag/metrics.h"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sumtag {
namespace {

// Reference length closest to the candidate length; ties go to the shorter.
std::size_t closest_reference_length(std::size_t candidate_length,
                                     const std::vector<TokenSequence>& refs) {
  std::size_t best = refs.front().size();
  for (const auto& ref : refs) {
    const std::size_t len = ref.size();
    const auto diff = [&](std::size_t r) {
      return r > candidate_length ? r - candidate_length : candidate_length - r;
    };
    if (diff(len) < diff(best) || (diff(len) == diff(best) && len < best)) {
      best = len;
    }
  }
  return best;
}

}  // namespace

double brevity_penalty(std::size_t candidate_length,
                       std::size_t reference_length) {
  if (candidate_length == 0) return 0.0;
  if (candidate_length >= reference_length) return 1.0;
  return std::exp(1.0 - static_cast<double>(reference_length) /
                            static_cast<double>(candidate_length));
}

BleuReport bleu_corpus(const std::vector<TokenSequence>& candidates,
                       const std::vector<std::vector<TokenSequence>>& references,
                       const BleuOptions& options) {
  if (candidates.empty()) throw std::invalid_argument("empty corpus");
  if (candidates.size() != references.size()) {
    throw std::invalid_argument("candidate and reference counts differ");
  }
  if (options.max_order == 0) {
    throw std::invalid_argument("max_order must be >= 1");
  }

  BleuReport report;
  report.max_order = options.max_order;
  report.matches.assign(options.max_order, 0);
  report.totals.assign(options.max_order, 0);

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& refs = references[i];
    if (refs.empty()) {
      throw std::invalid_argument("empty reference list for pair " +
                                  std::to_string(i));
    }
    const auto& cand = candidates[i];
    report.candidate_length += cand.size();
    report.effective_reference_length +=
        closest_reference_length(cand.size(), refs);

    for (std::size_t n = 1; n <= options.max_order; ++n) {
      const NGramCounts cand_counts = ngram_counts(cand, n);
      std::map<NGram, std::size_t> max_ref;
      for (const auto& ref : refs) {
        const NGramCounts ref_counts = ngram_counts(ref, n);
        for (const auto& [gram, c] : ref_counts.counts()) {
          auto& slot = max_ref[gram];
          slot = std::max(slot, c);
        }
      }
      std::size_t clipped = 0;
      for (const auto& [gram, c] : cand_counts.counts()) {
        auto it = max_ref.find(gram);
        if (it != max_ref.end()) clipped += std::min(c, it->second);
      }
      report.matches[n - 1] += clipped;
      report.totals[n - 1] += cand_counts.total();
    }
  }

  report.precisions.assign(options.max_order, 0.0);
  bool any_zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < options.max_order; ++n) {
    const double total = static_cast<double>(report.totals[n]);
    double p = total > 0 ? static_cast<double>(report.matches[n]) / total : 0.0;
    if (p == 0.0 && options.smoothing == Smoothing::kAddEpsilon) {
      p = total > 0 ? options.epsilon / total : options.epsilon;
    }
    report.precisions[n] = p;
    if (p == 0.0) {
      any_zero = true;
    } else {
      log_sum += std::log(p);
    }
  }

  report.brevity_penalty = brevity_penalty(report.candidate_length,
                                           report.effective_reference_length);
  if (any_zero) {
    report.bleu = 0.0;
  } else {
    report.bleu = 100.0 * report.brevity_penalty *
                  std::exp(log_sum / static_cast<double>(options.max_order));
  }
  return report;
}

RougeTriple make_rouge_triple(double precision, double recall) {
  RougeTriple t;
  t.precision = 100.0 * precision;
  t.recall = 100.0 * recall;
  const double denom = precision + recall;
  t.f1 = denom > 0 ? 100.0 * (2.0 * precision * recall / denom) : 0.0;
  return t;
}

RougeTriple rouge_n(const TokenSequence& candidate,
                    const TokenSequence& reference, std::size_t n) {
  const NGramCounts cand = ngram_counts(candidate, n);
  const NGramCounts ref = ngram_counts(reference, n);
  std::size_t matches = 0;
  for (const auto& [gram, c] : cand.counts()) {
    matches += std::min(c, ref.count(gram));
  }
  const double precision =
      cand.total() > 0 ? static_cast<double>(matches) / cand.total() : 0.0;
  const double recall =
      ref.total() > 0 ? static_cast<double>(matches) / ref.total() : 0.0;
  return make_rouge_triple(precision, recall);
}

RougeTriple rouge_l(const TokenSequence& candidate,
                    const TokenSequence& reference) {
  if (candidate.empty() || reference.empty()) return {};
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  return make_rouge_triple(lcs / static_cast<double>(candidate.size()),
                           lcs / static_cast<double>(reference.size()));
}

EvaluationReport evaluate_corpus(const std::vector<TextPair>& pairs,
                                 const TokenizationScheme& scheme,
                                 const MetricOptions& options) {
  if (pairs.empty()) throw std::invalid_argument("empty corpus");

  std::vector<TokenSequence> candidates;
  std::vector<std::vector<TokenSequence>> references;
  candidates.reserve(pairs.size());
  references.reserve(pairs.size());

  EvaluationReport report;
  auto accumulate = [](RougeTriple& sum, const RougeTriple& t) {
    sum.precision += t.precision;
    sum.recall += t.recall;
    sum.f1 += t.f1;
  };
  for (const auto& pair : pairs) {
    TokenSequence cand = tokenize(pair.candidate, scheme);
    TokenSequence ref = tokenize(pair.reference, scheme);
    accumulate(report.rouge1, rouge_n(cand, ref, 1));
    accumulate(report.rouge2, rouge_n(cand, ref, 2));
    accumulate(report.rougeL, rouge_l(cand, ref));
    candidates.push_back(std::move(cand));
    references.push_back({std::move(ref)});
  }
  const double n = static_cast<double>(pairs.size());
  for (RougeTriple* t : {&report.rouge1, &report.rouge2, &report.rougeL}) {
    t->precision /= n;
    t->recall /= n;
    t->f1 /= n;
  }
  report.bleu4 = bleu_corpus(candidates, references, options.bleu);
  report.num_pairs = pairs.size();
  return report;
}

EvaluationDelta compare_reports(const EvaluationReport& before,
                                const EvaluationReport& after) {
  auto diff = [](const RougeTriple& b, const RougeTriple& a) {
    return RougeTriple{a.precision - b.precision, a.recall - b.recall,
                       a.f1 - b.f1};
  };
  return {after.bleu4.bleu - before.bleu4.bleu,
          diff(before.rouge1, after.rouge1), diff(before.rouge2, after.rouge2),
          diff(before.rougeL, after.rougeL)};
}

double round_for_display(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double rounded = std::nearbyint(value * scale) / scale;
  std::fesetround(saved);
  return rounded;
}

}  // namespace sumtag
