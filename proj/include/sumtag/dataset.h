#pragma once

// Alpaca-style instruction records and deterministic dataset partitions.
//
// Shuffling uses std::mt19937_64 (whose output sequence is fixed by the C++
// standard) seeded with the user seed, with a Fisher-Yates pass that draws
// each index by rejection sampling on the raw 64-bit output. No standard
// distribution is involved, so splits are identical on every platform.

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumtag {

struct InstructionExample {
  std::size_t id = 0;  // source index in the loaded file
  std::string instruction;
  std::string input;
  std::string output;

  friend bool operator==(const InstructionExample&,
                         const InstructionExample&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a UTF-8 JSON document holding an array of records with string fields
// `instruction`, `output` and optional `input`. ids are 0..N-1 in file order.
std::vector<InstructionExample> load_instruction_dataset(
    const std::filesystem::path& path);
std::vector<InstructionExample> parse_instruction_dataset(
    const std::string& json_text);

using SplitRatios = std::array<std::uint32_t, 3>;

struct DatasetSplit {
  std::vector<InstructionExample> train;
  std::vector<InstructionExample> validation;
  std::vector<InstructionExample> test;
  std::uint64_t seed = 0;
  SplitRatios ratios{};
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

// train = floor(N*a/S), validation = floor(N*b/S), test = the remainder.
SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios);

// Permutation of 0..n-1 produced by the seeded Fisher-Yates shuffle.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

// Throws std::invalid_argument for a zero ratio component or when there are
// fewer examples than the ratio total.
DatasetSplit split_dataset(const std::vector<InstructionExample>& examples,
                           const SplitRatios& ratios, std::uint64_t seed);

struct HoldoutSplit {
  std::vector<InstructionExample> rest;
  std::vector<InstructionExample> heldout;
};

// heldout = the first floor(N*fraction) examples in shuffled order.
HoldoutSplit holdout_split(const std::vector<InstructionExample>& examples,
                           double fraction, std::uint64_t seed);

// Writes train.ids, validation.ids, test.ids (one id per line) and split.json.
void write_split_manifests(const DatasetSplit& split,
                           const std::filesystem::path& dir);
void write_holdout_manifests(const HoldoutSplit& split, double fraction,
                             std::uint64_t seed,
                             const std::filesystem::path& dir);

SplitRatios parse_ratios(const std::string& text);  // "8:1:1"

}  // namespace sumtag
