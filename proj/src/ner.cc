#include "sumtag/ner.h"

#include <fstream>
#include <sstream>

#include "sumtag/unicode.h"

namespace sumtag {
namespace {

constexpr std::string_view kCloser = "[/]";

bool is_boundary(char32_t c) {
  return unicode::is_whitespace(c) || unicode::is_punct_or_symbol(c);
}

// Where an entity starting at `start` ends when no closer is written.
std::size_t implicit_end(std::u32string_view text, std::size_t start,
                         std::size_t next_start) {
  std::size_t j = start + 1;
  while (j < text.size() && j != next_start && !is_boundary(text[j])) ++j;
  return j;
}

void check_spans(std::size_t length, const std::vector<EntitySpan>& spans) {
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.start >= s.end || s.end > length) {
      throw NerError("span " + std::to_string(i) + " [" +
                     std::to_string(s.start) + ", " + std::to_string(s.end) +
                     ") is out of range");
    }
    if (i > 0 && s.start < previous_end) {
      throw NerError("span " + std::to_string(i) +
                     " overlaps or precedes the previous span");
    }
    previous_end = s.end;
  }
}

std::string strip_line_end(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string_view to_string(EntityLabel label) {
  switch (label) {
    case EntityLabel::kPerson:
      return "PERSON";
    case EntityLabel::kLocation:
      return "LOCATION";
    case EntityLabel::kOrganization:
      return "ORGANIZATION";
    case EntityLabel::kTechnologyModel:
      return "TECHNOLOGY/MODEL";
    case EntityLabel::kAlgorithm:
      return "ALGORITHM";
    case EntityLabel::kConceptTerm:
      return "CONCEPT/TERM";
  }
  return "";
}

std::optional<EntityLabel> parse_label(std::string_view text) {
  for (EntityLabel label : kAllLabels) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

TaggedText make_tagged_text(std::string text, std::vector<EntitySpan> spans) {
  const std::u32string cps = unicode::decode(text);
  check_spans(cps.size(), spans);
  TaggedText out;
  for (auto& span : spans) {
    span.surface = unicode::encode(
        std::u32string_view(cps).substr(span.start, span.end - span.start));
    out.tags.insert(span.label);
  }
  out.text = std::move(text);
  out.spans = std::move(spans);
  return out;
}

Gazetteer::Gazetteer(bool case_sensitive)
    : case_sensitive_(case_sensitive), nodes_(1) {}

char32_t Gazetteer::key_char(char32_t c) const {
  return case_sensitive_ ? c : unicode::fold_case(c);
}

void Gazetteer::add(std::string_view surface, EntityLabel label) {
  const std::u32string cps = unicode::decode(surface);
  if (cps.empty()) throw NerError("gazetteer surface must not be empty");
  std::size_t node = 0;
  for (char32_t c : cps) {
    const char32_t key = key_char(c);
    auto it = nodes_[node].next.find(key);
    if (it == nodes_[node].next.end()) {
      nodes_.emplace_back();
      it = nodes_[node].next.emplace(key, nodes_.size() - 1).first;
    }
    node = it->second;
  }
  auto& existing = nodes_[node].label;
  if (existing && *existing != label) {
    throw NerError("gazetteer entry '" + std::string(surface) +
                   "' already has label " + std::string(to_string(*existing)));
  }
  if (!existing) ++size_;
  existing = label;
}

Gazetteer Gazetteer::parse(std::string_view content, bool case_sensitive) {
  Gazetteer g(case_sensitive);
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_line_end(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw NerError("gazetteer line " + std::to_string(line_no) +
                     ": expected surface<TAB>LABEL");
    }
    const std::string surface = line.substr(0, tab);
    const std::string label_text = line.substr(tab + 1);
    const auto label = parse_label(label_text);
    if (!label) {
      throw NerError("gazetteer line " + std::to_string(line_no) +
                     ": unknown label '" + label_text + "'");
    }
    try {
      g.add(surface, *label);
    } catch (const NerError& e) {
      throw NerError("gazetteer line " + std::to_string(line_no) + ": " +
                     e.what());
    }
  }
  return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path,
                          bool case_sensitive) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NerError("cannot read gazetteer " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), case_sensitive);
}

std::optional<std::pair<std::size_t, EntityLabel>> Gazetteer::longest_match(
    std::u32string_view text, std::size_t pos) const {
  std::optional<std::pair<std::size_t, EntityLabel>> best;
  std::size_t node = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    auto it = nodes_[node].next.find(key_char(text[i]));
    if (it == nodes_[node].next.end()) break;
    node = it->second;
    if (nodes_[node].label) best.emplace(i + 1 - pos, *nodes_[node].label);
  }
  return best;
}

TaggedText tag_entities(std::string_view text, const Gazetteer& gazetteer) {
  const std::u32string cps = unicode::decode(text);
  std::vector<EntitySpan> spans;
  std::size_t pos = 0;
  while (pos < cps.size()) {
    if (auto match = gazetteer.longest_match(cps, pos)) {
      spans.push_back({pos, pos + match->first, match->second, {}});
      pos += match->first;
    } else {
      ++pos;
    }
  }
  return make_tagged_text(std::string(text), std::move(spans));
}

std::string render_bracketed(const TaggedText& tagged) {
  const std::u32string cps = unicode::decode(tagged.text);
  check_spans(cps.size(), tagged.spans);

  std::string out;
  out.reserve(tagged.text.size() + tagged.spans.size() * 16);
  std::size_t next = 0;  // next span to open
  std::size_t close_at = std::u32string::npos;
  for (std::size_t i = 0; i <= cps.size(); ++i) {
    if (close_at == i) {
      out += kCloser;
      close_at = std::u32string::npos;
    }
    if (i == cps.size()) break;
    if (next < tagged.spans.size() && tagged.spans[next].start == i) {
      const auto& span = tagged.spans[next];
      const std::size_t following =
          next + 1 < tagged.spans.size() ? tagged.spans[next + 1].start
                                         : std::u32string::npos;
      out += '[';
      out += to_string(span.label);
      out += "] ";
      if (implicit_end(cps, span.start, following) != span.end) {
        close_at = span.end;
      }
      ++next;
    }
    if (cps[i] == U'[') {
      out += "[[";
    } else {
      out += unicode::encode(cps[i]);
    }
  }
  return out;
}

TaggedText parse_bracketed(std::string_view annotated) {
  const std::u32string in = unicode::decode(annotated);

  struct Marker {
    bool closer;
    std::size_t pos;  // offset in the decoded text
    EntityLabel label;
  };
  std::u32string text;
  std::vector<Marker> markers;

  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] != U'[') {
      text.push_back(in[i++]);
      continue;
    }
    if (i + 1 < in.size() && in[i + 1] == U'[') {
      text.push_back(U'[');
      i += 2;
      continue;
    }
    const auto close = in.find(U']', i + 1);
    if (close == std::u32string::npos) {
      throw NerError("unterminated bracket at offset " + std::to_string(i));
    }
    const std::string name =
        unicode::encode(std::u32string_view(in).substr(i + 1, close - i - 1));
    if (name == "/") {
      markers.push_back({true, text.size(), EntityLabel::kConceptTerm});
      i = close + 1;
      continue;
    }
    const auto label = parse_label(name);
    if (!label) throw NerError("unknown label '" + name + "'");
    if (close + 1 >= in.size() || in[close + 1] != U' ') {
      throw NerError("label '" + name + "' must be followed by a space");
    }
    markers.push_back({false, text.size(), *label});
    i = close + 2;
  }

  std::vector<EntitySpan> spans;
  for (std::size_t k = 0; k < markers.size(); ++k) {
    const Marker& m = markers[k];
    if (m.closer) throw NerError("closing marker without an open entity");
    if (m.pos >= text.size()) {
      throw NerError("entity " + std::string(to_string(m.label)) +
                     " at end of text is empty");
    }
    std::size_t end;
    if (k + 1 < markers.size() && markers[k + 1].closer) {
      end = markers[k + 1].pos;
      ++k;
    } else {
      const std::size_t following =
          k + 1 < markers.size() ? markers[k + 1].pos : std::u32string::npos;
      end = implicit_end(text, m.pos, following);
    }
    if (end <= m.pos || (k + 1 < markers.size() && markers[k + 1].pos < end)) {
      throw NerError("entity " + std::string(to_string(m.label)) + " at offset " +
                     std::to_string(m.pos) + " is empty");
    }
    spans.push_back({m.pos, end, m.label, {}});
  }
  return make_tagged_text(unicode::encode(text), std::move(spans));
}

}  // namespace sumtag
