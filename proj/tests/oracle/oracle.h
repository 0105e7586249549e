#pragma once

// Brute-force reference implementations used only by tests. Nothing here
// includes or calls library code: tokens are plain string vectors and every
// count is done by linear scans straight from the metric definitions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Tokens = std::vector<std::string>;

inline Tokens split_ws(const std::string& text) {
  std::istringstream in(text);
  Tokens out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline bool is_subsequence(const Tokens& sub, const Tokens& of) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < of.size() && j < sub.size(); ++i) {
    if (of[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

// Tries every subset of the shorter sequence (|shorter| <= ~20).
inline std::size_t lcs_brute_force(const Tokens& a, const Tokens& b) {
  const Tokens& shorter = a.size() <= b.size() ? a : b;
  const Tokens& longer = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::size_t n = shorter.size();
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    Tokens sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ul << i)) sub.push_back(shorter[i]);
    }
    if (sub.size() > best && is_subsequence(sub, longer)) best = sub.size();
  }
  return best;
}

// Every window of n tokens, in order, duplicates kept.
inline std::vector<Tokens> windows(const Tokens& s, std::size_t n) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    out.emplace_back(s.begin() + i, s.begin() + i + n);
  }
  return out;
}

inline std::size_t occurrences(const std::vector<Tokens>& grams,
                               const Tokens& g) {
  return static_cast<std::size_t>(std::count(grams.begin(), grams.end(), g));
}

struct Bleu {
  double bleu = 0;
  std::vector<double> precisions;
  double bp = 0;
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;
};

// Corpus BLEU from the definition: per order, sum clipped counts over the
// corpus, divide by summed candidate n-gram counts, geometric mean, times the
// brevity penalty on summed lengths (closest reference, ties to the shorter).
inline Bleu bleu(const std::vector<Tokens>& cands,
                 const std::vector<std::vector<Tokens>>& refs,
                 std::size_t max_order, double epsilon = 0.0) {
  Bleu out;
  std::vector<double> clipped(max_order, 0), total(max_order, 0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const Tokens& c = cands[i];
    out.cand_len += c.size();
    std::size_t best = refs[i][0].size();
    for (const Tokens& r : refs[i]) {
      const long d = std::labs(static_cast<long>(r.size()) - static_cast<long>(c.size()));
      const long db = std::labs(static_cast<long>(best) - static_cast<long>(c.size()));
      if (d < db || (d == db && r.size() < best)) best = r.size();
    }
    out.ref_len += best;
    for (std::size_t n = 1; n <= max_order; ++n) {
      const auto cg = windows(c, n);
      total[n - 1] += static_cast<double>(cg.size());
      std::vector<Tokens> seen;
      for (const Tokens& g : cg) {
        if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
        seen.push_back(g);
        std::size_t max_ref = 0;
        for (const Tokens& r : refs[i]) {
          max_ref = std::max(max_ref, occurrences(windows(r, n), g));
        }
        clipped[n - 1] += static_cast<double>(std::min(occurrences(cg, g), max_ref));
      }
    }
  }
  bool zero = false;
  double log_sum = 0;
  for (std::size_t n = 0; n < max_order; ++n) {
    double p = total[n] > 0 ? clipped[n] / total[n] : 0.0;
    if (p == 0 && epsilon > 0) p = total[n] > 0 ? epsilon / total[n] : epsilon;
    out.precisions.push_back(p);
    if (p == 0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  if (out.cand_len == 0) {
    out.bp = 0;
  } else if (out.cand_len >= out.ref_len) {
    out.bp = 1;
  } else {
    out.bp = std::exp(1.0 - static_cast<double>(out.ref_len) /
                                static_cast<double>(out.cand_len));
  }
  out.bleu = zero ? 0.0 : 100.0 * out.bp * std::exp(log_sum / max_order);
  return out;
}

struct Prf {
  double p = 0, r = 0, f = 0;  // 0..100
};

inline Prf prf(double p, double r) {
  Prf out;
  out.p = 100.0 * p;
  out.r = 100.0 * r;
  out.f = (p + r) > 0 ? 100.0 * (2.0 * p * r / (p + r)) : 0.0;
  return out;
}

inline Prf rouge_n(const Tokens& cand, const Tokens& ref, std::size_t n) {
  const auto cg = windows(cand, n);
  const auto rg = windows(ref, n);
  std::vector<Tokens> seen;
  double matches = 0;
  for (const Tokens& g : cg) {
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    matches += static_cast<double>(std::min(occurrences(cg, g), occurrences(rg, g)));
  }
  return prf(cg.empty() ? 0.0 : matches / static_cast<double>(cg.size()),
             rg.empty() ? 0.0 : matches / static_cast<double>(rg.size()));
}

inline Prf rouge_l(const Tokens& cand, const Tokens& ref) {
  if (cand.empty() || ref.empty()) return {};
  const double l = static_cast<double>(lcs_brute_force(cand, ref));
  return prf(l / static_cast<double>(cand.size()), l / static_cast<double>(ref.size()));
}

inline bool close_rel(double a, double b, double rel) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace oracle
