#include "sumtag/dataset.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sumtag/unicode.h"

namespace sumtag {
namespace {

using json = nlohmann::json;

bool blank(const std::string& s) {
  for (char32_t c : unicode::decode(s)) {
    if (!unicode::is_whitespace(c)) return false;
  }
  return true;
}

std::string required_string(const json& record, const char* key,
                            std::size_t index) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw DatasetError("record " + std::to_string(index) + ": missing \"" +
                       key + "\"");
  }
  if (!it->is_string()) {
    throw DatasetError("record " + std::to_string(index) + ": \"" + key +
                       "\" is not a string");
  }
  std::string value = it->get<std::string>();
  if (blank(value)) {
    throw DatasetError("record " + std::to_string(index) + ": \"" + key +
                       "\" is empty");
  }
  return value;
}

// Unbiased draw from [0, bound] using the raw engine output.
std::uint64_t draw_at_most(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == std::numeric_limits<std::uint64_t>::max()) return engine();
  const std::uint64_t range = bound + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % range;
}

void write_ids(const std::filesystem::path& path,
               const std::vector<InstructionExample>& part) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  for (const auto& ex : part) out << ex.id << '\n';
  if (!out) throw DatasetError("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::vector<InstructionExample> parse_instruction_dataset(
    const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::string("malformed dataset: ") + e.what());
  }
  if (!doc.is_array()) {
    throw DatasetError("malformed dataset: top level is not an array");
  }
  std::vector<InstructionExample> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& record = doc[i];
    if (!record.is_object()) {
      throw DatasetError("record " + std::to_string(i) + ": not an object");
    }
    InstructionExample ex;
    ex.id = i;
    ex.instruction = required_string(record, "instruction", i);
    ex.output = required_string(record, "output", i);
    if (auto it = record.find("input"); it != record.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw DatasetError("record " + std::to_string(i) +
                           ": \"input\" is not a string");
      }
      ex.input = it->get<std::string>();
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<InstructionExample> load_instruction_dataset(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read dataset file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DatasetError("read error on " + path.string());
  return parse_instruction_dataset(buffer.str());
}

SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios) {
  const std::uint64_t total =
      std::uint64_t{ratios[0]} + ratios[1] + ratios[2];
  SplitSizes sizes;
  sizes.train = static_cast<std::size_t>(n * std::uint64_t{ratios[0]} / total);
  sizes.validation =
      static_cast<std::size_t>(n * std::uint64_t{ratios[1]} / total);
  sizes.test = n - sizes.train - sizes.validation;
  return sizes;
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 engine(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(draw_at_most(engine, i - 1));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

DatasetSplit split_dataset(const std::vector<InstructionExample>& examples,
                           const SplitRatios& ratios, std::uint64_t seed) {
  for (auto r : ratios) {
    if (r == 0) throw std::invalid_argument("ratio components must be positive");
  }
  const std::uint64_t ratio_total =
      std::uint64_t{ratios[0]} + ratios[1] + ratios[2];
  if (examples.size() < 3 || examples.size() < ratio_total) {
    throw std::invalid_argument(
        "need at least " + std::to_string(std::max<std::uint64_t>(3, ratio_total)) +
        " examples to split, got " + std::to_string(examples.size()));
  }

  const SplitSizes sizes = split_sizes(examples.size(), ratios);
  const auto order = shuffled_order(examples.size(), seed);

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  split.train.reserve(sizes.train);
  split.validation.reserve(sizes.validation);
  split.test.reserve(sizes.test);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& ex = examples[order[k]];
    if (k < sizes.train) {
      split.train.push_back(ex);
    } else if (k < sizes.train + sizes.validation) {
      split.validation.push_back(ex);
    } else {
      split.test.push_back(ex);
    }
  }
  return split;
}

HoldoutSplit holdout_split(const std::vector<InstructionExample>& examples,
                           double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("holdout fraction must lie in [0, 1]");
  }
  const double exact = static_cast<double>(examples.size()) * fraction;
  // Absorb representation error such as 0.29 * 100 = 28.999999999999996.
  auto held = static_cast<std::size_t>(std::floor(exact + 1e-9));
  held = std::min(held, examples.size());

  const auto order = shuffled_order(examples.size(), seed);
  HoldoutSplit out;
  out.heldout.reserve(held);
  out.rest.reserve(examples.size() - held);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < held ? out.heldout : out.rest).push_back(examples[order[k]]);
  }
  return out;
}

void write_split_manifests(const DatasetSplit& split,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_ids(dir / "train.ids", split.train);
  write_ids(dir / "validation.ids", split.validation);
  write_ids(dir / "test.ids", split.test);
  json meta = {
      {"seed", split.seed},
      {"ratios", {split.ratios[0], split.ratios[1], split.ratios[2]}},
      {"counts",
       {{"train", split.train.size()},
        {"validation", split.validation.size()},
        {"test", split.test.size()}}},
      {"total", split.train.size() + split.validation.size() + split.test.size()},
      {"prng", "mt19937_64/fisher-yates/rejection"},
  };
  write_json(dir / "split.json", meta);
}

void write_holdout_manifests(const HoldoutSplit& split, double fraction,
                             std::uint64_t seed,
                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_ids(dir / "rest.ids", split.rest);
  write_ids(dir / "heldout.ids", split.heldout);
  json meta = {
      {"seed", seed},
      {"fraction", fraction},
      {"counts", {{"rest", split.rest.size()}, {"heldout", split.heldout.size()}}},
      {"total", split.rest.size() + split.heldout.size()},
      {"prng", "mt19937_64/fisher-yates/rejection"},
  };
  write_json(dir / "split.json", meta);
}

SplitRatios parse_ratios(const std::string& text) {
  SplitRatios ratios{};
  std::stringstream in(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ':')) {
    if (i >= 3) throw std::invalid_argument("expected three ratio parts: " + text);
    std::size_t consumed = 0;
    long long v = 0;
    try {
      v = std::stoll(part, &consumed);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad ratio component '" + part + "'");
    }
    if (consumed != part.size() || v <= 0 || v > 1000000) {
      throw std::invalid_argument("bad ratio component '" + part + "'");
    }
    ratios[i++] = static_cast<std::uint32_t>(v);
  }
  if (i != 3) throw std::invalid_argument("expected three ratio parts: " + text);
  return ratios;
}

}  // namespace sumtag
