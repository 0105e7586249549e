#pragma once

// BLEU and ROUGE on the 0-100 scale. Internal values are kept at full
// precision; use round_for_display() only when presenting.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sumtag/text.h"

namespace sumtag {

enum class Smoothing { kNone, kAddEpsilon };

struct BleuReport {
  double bleu = 0.0;                // [0, 100]
  std::vector<double> precisions;   // clipped p_1..p_N in [0, 1]
  std::vector<std::size_t> matches; // clipped matches per order
  std::vector<std::size_t> totals;  // candidate n-grams per order
  double brevity_penalty = 0.0;
  std::size_t candidate_length = 0;
  std::size_t effective_reference_length = 0;
  std::size_t max_order = 4;
};

struct BleuOptions {
  std::size_t max_order = 4;
  Smoothing smoothing = Smoothing::kNone;
  double epsilon = 1e-9;
};

// Corpus-level BLEU. references[i] holds every reference for candidates[i].
// Throws std::invalid_argument on an empty corpus, a size mismatch, an empty
// reference list, or max_order == 0.
BleuReport bleu_corpus(const std::vector<TokenSequence>& candidates,
                       const std::vector<std::vector<TokenSequence>>& references,
                       const BleuOptions& options = {});

// Brevity penalty for the given lengths. A zero-length candidate gets 0.
double brevity_penalty(std::size_t candidate_length,
                       std::size_t reference_length);

struct RougeTriple {
  double precision = 0.0;  // [0, 100]
  double recall = 0.0;
  double f1 = 0.0;
};

// Builds a triple from [0,1]-scale precision and recall.
RougeTriple make_rouge_triple(double precision, double recall);

RougeTriple rouge_n(const TokenSequence& candidate,
                    const TokenSequence& reference, std::size_t n);
RougeTriple rouge_l(const TokenSequence& candidate,
                    const TokenSequence& reference);

struct MetricOptions {
  BleuOptions bleu;
};

struct EvaluationReport {
  BleuReport bleu4;
  RougeTriple rouge1;
  RougeTriple rouge2;
  RougeTriple rougeL;
  std::size_t num_pairs = 0;
};

struct TextPair {
  std::string candidate;
  std::string reference;
};

// Tokenizes both sides under `scheme`; BLEU is corpus-level, ROUGE triples
// are the unweighted mean of per-pair scores.
EvaluationReport evaluate_corpus(const std::vector<TextPair>& pairs,
                                 const TokenizationScheme& scheme,
                                 const MetricOptions& options = {});

// after - before, component-wise, for before/after comparisons.
struct EvaluationDelta {
  double bleu4 = 0.0;
  RougeTriple rouge1;
  RougeTriple rouge2;
  RougeTriple rougeL;
};
EvaluationDelta compare_reports(const EvaluationReport& before,
                                const EvaluationReport& after);

// Half-even rounding to `decimals` places.
double round_for_display(double value, int decimals = 2);

}  // namespace sumtag
