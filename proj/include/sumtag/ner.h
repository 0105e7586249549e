#pragma once

// Gazetteer tagging and the inline bracketed annotation format.
//
// Bracketed format: each entity is preceded by "[LABEL] ". The entity
// extends to its implicit end, the first position after its first character
// holding whitespace, punctuation or a symbol, or where the next entity
// starts, or the end of the text. An entity ending anywhere else is closed
// with "[/]". A literal '[' in the text is written "[[".

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sumtag {

enum class EntityLabel {
  kPerson,
  kLocation,
  kOrganization,
  kTechnologyModel,
  kAlgorithm,
  kConceptTerm,
};

inline constexpr EntityLabel kAllLabels[] = {
    EntityLabel::kPerson,          EntityLabel::kLocation,
    EntityLabel::kOrganization,    EntityLabel::kTechnologyModel,
    EntityLabel::kAlgorithm,       EntityLabel::kConceptTerm,
};

// "PERSON", "LOCATION", "ORGANIZATION", "TECHNOLOGY/MODEL", "ALGORITHM",
// "CONCEPT/TERM".
std::string_view to_string(EntityLabel label);
std::optional<EntityLabel> parse_label(std::string_view text);

using LabelSet = std::set<EntityLabel>;

class NerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Offsets count Unicode scalar values; [start, end) is half-open.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityLabel label = EntityLabel::kConceptTerm;
  std::string surface;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct TaggedText {
  std::string text;
  std::vector<EntitySpan> spans;  // sorted by start, non-overlapping
  LabelSet tags;                  // labels occurring in spans

  friend bool operator==(const TaggedText&, const TaggedText&) = default;
};

// Builds a TaggedText from spans, filling surfaces and tags. Throws NerError
// if any span is out of range, empty, unsorted or overlapping.
TaggedText make_tagged_text(std::string text, std::vector<EntitySpan> spans);

class Gazetteer {
 public:
  explicit Gazetteer(bool case_sensitive = false);

  // Throws NerError on an empty surface or on a surface already mapped to a
  // different label (after case folding when case-insensitive).
  void add(std::string_view surface, EntityLabel label);

  // `surface<TAB>LABEL` per line; blank lines and lines starting with '#'
  // are skipped.
  static Gazetteer parse(std::string_view content, bool case_sensitive = false);
  static Gazetteer load(const std::filesystem::path& path,
                        bool case_sensitive = false);

  bool case_sensitive() const { return case_sensitive_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  // Longest entry matching at `pos`: (length in scalar values, label).
  std::optional<std::pair<std::size_t, EntityLabel>> longest_match(
      std::u32string_view text, std::size_t pos) const;

  // Folds a scalar value the way lookups do.
  char32_t key_char(char32_t c) const;

 private:
  struct Node {
    std::map<char32_t, std::size_t> next;
    std::optional<EntityLabel> label;
  };

  bool case_sensitive_;
  std::size_t size_ = 0;
  std::vector<Node> nodes_;
};

// Leftmost-longest, non-overlapping matching.
TaggedText tag_entities(std::string_view text, const Gazetteer& gazetteer);

std::string render_bracketed(const TaggedText& tagged);

// Inverse of render_bracketed. Throws NerError on an unknown label, an
// unterminated bracket, a label not followed by a space, an empty entity or
// a stray "[/]".
TaggedText parse_bracketed(std::string_view annotated);

}  // namespace sumtag
