#pragma once

// Document model and ingestion: inline-entity abstract markup, the
// LABEL(ID1,ID2[,REVERSE]) relation file grammar, CoNLL-style annotation
// sidecars, and the canonical one-document-per-line record file.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "scirel/errors.hpp"
#include "scirel/util.hpp"

namespace scirel {

constexpr int kRootHead = -1;

struct Token {
  std::string surface;
  std::string pos;
  int char_begin = 0;
  int char_end = 0;  // exclusive
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<int> heads;  // 0-based within sentence, kRootHead for the root
  std::vector<std::string> deprels;

  int size() const { return (int)tokens.size(); }
};

struct EntitySpan {
  std::string id;
  int sentence_index = 0;
  int token_begin = 0;
  int token_end = 0;  // exclusive
  std::string text;
};

struct AnnotatedAbstract {
  std::string doc_id;
  std::string raw_text;
  std::vector<Sentence> sentences;
  std::vector<EntitySpan> entities;

  const EntitySpan& entity(const std::string& id) const {
    for (const auto& e : entities)
      if (e.id == id) return e;
    throw LookupError("unknown entity id " + id + " in document " + doc_id);
  }
  bool has_entity(const std::string& id) const {
    for (const auto& e : entities)
      if (e.id == id) return true;
    return false;
  }
};

// ---------------------------------------------------------------------------
// Relation labels

enum class RelationType {
  kUsage,
  kResult,
  kModelFeature,
  kPartWhole,
  kTopic,
  kCompare,
  kNone,
};

enum class Direction { kForward, kReverse };

constexpr int kNumRelationClasses = 6;   // directional + COMPARE, without NONE
constexpr int kNumTwelveLabels = 12;     // 5 x 2 directions + COMPARE + NONE

inline const char* relation_type_name(RelationType t) {
  switch (t) {
    case RelationType::kUsage: return "USAGE";
    case RelationType::kResult: return "RESULT";
    case RelationType::kModelFeature: return "MODEL-FEATURE";
    case RelationType::kPartWhole: return "PART_WHOLE";
    case RelationType::kTopic: return "TOPIC";
    case RelationType::kCompare: return "COMPARE";
    case RelationType::kNone: return "NONE";
  }
  return "?";
}

inline std::optional<RelationType> relation_type_from_name(
    std::string_view name) {
  for (RelationType t :
       {RelationType::kUsage, RelationType::kResult, RelationType::kModelFeature,
        RelationType::kPartWhole, RelationType::kTopic, RelationType::kCompare,
        RelationType::kNone}) {
    if (name == relation_type_name(t)) return t;
  }
  return std::nullopt;
}

inline bool is_directional(RelationType t) {
  return t != RelationType::kCompare && t != RelationType::kNone;
}

struct RelationInstance {
  std::string doc_id;
  std::string left_id;   // document order; precedes right_id
  std::string right_id;
  RelationType type = RelationType::kNone;
  Direction direction = Direction::kForward;
};

// Twelve-label scheme: the 5 directional types get a _REVERSE twin, plus
// COMPARE and NONE.
inline int twelve_label_index(RelationType t, Direction d) {
  switch (t) {
    case RelationType::kUsage: return d == Direction::kForward ? 0 : 1;
    case RelationType::kResult: return d == Direction::kForward ? 2 : 3;
    case RelationType::kModelFeature: return d == Direction::kForward ? 4 : 5;
    case RelationType::kPartWhole: return d == Direction::kForward ? 6 : 7;
    case RelationType::kTopic: return d == Direction::kForward ? 8 : 9;
    case RelationType::kCompare: return 10;
    case RelationType::kNone: return 11;
  }
  return 11;
}

inline std::pair<RelationType, Direction> twelve_label_decode(int index) {
  static const RelationType types[] = {
      RelationType::kUsage,     RelationType::kUsage,
      RelationType::kResult,    RelationType::kResult,
      RelationType::kModelFeature, RelationType::kModelFeature,
      RelationType::kPartWhole, RelationType::kPartWhole,
      RelationType::kTopic,     RelationType::kTopic,
      RelationType::kCompare,   RelationType::kNone};
  Direction d = (index < 10 && index % 2 == 1) ? Direction::kReverse
                                               : Direction::kForward;
  return {types[index], d};
}

inline int six_label_index(RelationType t) { return (int)t; }

inline std::string twelve_label_name(int index) {
  auto [t, d] = twelve_label_decode(index);
  std::string name = relation_type_name(t);
  if (d == Direction::kReverse) name += "_REVERSE";
  return name;
}

// ---------------------------------------------------------------------------
// Abstract markup: plain text with non-nested <entity id="...">...</entity>
// inside an <abstract> or <text> wrapper.

struct AbstractFragment {
  std::string doc_id;
  std::string raw_text;
  struct CharSpan {
    std::string id;
    int begin = 0;
    int end = 0;  // exclusive
    std::string text;
  };
  std::vector<CharSpan> entities;
};

namespace markup_detail {

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::unordered_map<std::string, std::string> attrs;
};

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
};

// Decodes the standard character references; a bare '&' that does not open
// a known reference passes through literally (the corpus text is not
// strictly escaped).
inline bool decode_entity_ref(Cursor& cur, std::string& out) {
  static const std::pair<const char*, char> named[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'},
      {"&quot;", '"'}, {"&apos;", '\''}};
  std::string_view rest = cur.text.substr(cur.pos);
  for (auto& [ref, ch] : named) {
    if (rest.starts_with(ref)) {
      out += ch;
      for (std::size_t i = 0; i < std::string_view(ref).size(); ++i)
        cur.advance();
      return true;
    }
  }
  if (rest.starts_with("&#")) {
    std::size_t i = 2;
    int base = 10;
    if (i < rest.size() && (rest[i] == 'x' || rest[i] == 'X')) {
      base = 16;
      ++i;
    }
    long code = 0;
    std::size_t digits_begin = i;
    while (i < rest.size() && rest[i] != ';') {
      char c = rest[i];
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else return false;
      code = code * base + v;
      ++i;
    }
    if (i >= rest.size() || i == digits_begin || code <= 0 || code > 0x10ffff)
      return false;
    // UTF-8 encode
    std::string enc;
    unsigned cp = (unsigned)code;
    if (cp < 0x80) enc += (char)cp;
    else if (cp < 0x800) {
      enc += (char)(0xc0 | (cp >> 6));
      enc += (char)(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
      enc += (char)(0xe0 | (cp >> 12));
      enc += (char)(0x80 | ((cp >> 6) & 0x3f));
      enc += (char)(0x80 | (cp & 0x3f));
    } else {
      enc += (char)(0xf0 | (cp >> 18));
      enc += (char)(0x80 | ((cp >> 12) & 0x3f));
      enc += (char)(0x80 | ((cp >> 6) & 0x3f));
      enc += (char)(0x80 | (cp & 0x3f));
    }
    out += enc;
    for (std::size_t k = 0; k <= i; ++k) cur.advance();
    return true;
  }
  return false;
}

inline Tag parse_tag(Cursor& cur) {
  int line = cur.line, col = cur.col;
  cur.advance();  // '<'
  Tag tag;
  if (!cur.done() && cur.peek() == '/') {
    tag.closing = true;
    cur.advance();
  }
  while (!cur.done() && (std::isalnum((unsigned char)cur.peek()) ||
                         cur.peek() == '_' || cur.peek() == '-' ||
                         cur.peek() == ':')) {
    tag.name += cur.peek();
    cur.advance();
  }
  if (tag.name.empty())
    throw ParseError("expected tag name after '<'", line, col);
  while (true) {
    while (!cur.done() && std::isspace((unsigned char)cur.peek())) cur.advance();
    if (cur.done()) throw ParseError("unterminated tag <" + tag.name, line, col);
    if (cur.peek() == '>') {
      cur.advance();
      return tag;
    }
    if (cur.peek() == '/') {
      cur.advance();
      if (cur.done() || cur.peek() != '>')
        throw ParseError("expected '>' after '/'", cur.line, cur.col);
      cur.advance();
      tag.self_closing = true;
      return tag;
    }
    if (tag.closing)
      throw ParseError("attributes on closing tag </" + tag.name + ">", line,
                       col);
    std::string key;
    while (!cur.done() && (std::isalnum((unsigned char)cur.peek()) ||
                           cur.peek() == '_' || cur.peek() == '-' ||
                           cur.peek() == ':')) {
      key += cur.peek();
      cur.advance();
    }
    if (key.empty())
      throw ParseError("malformed attribute in <" + tag.name + ">", cur.line,
                       cur.col);
    while (!cur.done() && std::isspace((unsigned char)cur.peek())) cur.advance();
    if (cur.done() || cur.peek() != '=')
      throw ParseError("expected '=' after attribute " + key, cur.line,
                       cur.col);
    cur.advance();
    while (!cur.done() && std::isspace((unsigned char)cur.peek())) cur.advance();
    if (cur.done() || (cur.peek() != '"' && cur.peek() != '\''))
      throw ParseError("expected quoted value for attribute " + key, cur.line,
                       cur.col);
    char quote = cur.peek();
    cur.advance();
    std::string value;
    while (!cur.done() && cur.peek() != quote) {
      if (cur.peek() == '&' && decode_entity_ref(cur, value)) continue;
      value += cur.peek();
      cur.advance();
    }
    if (cur.done())
      throw ParseError("unterminated attribute value for " + key, line, col);
    cur.advance();
    tag.attrs[key] = value;
  }
}

inline bool is_wrapper(const std::string& name) {
  return name == "abstract" || name == "text";
}

}  // namespace markup_detail

// Parses one or more documents out of a markup string. Each <abstract> or
// <text> wrapper opens a document (nested wrappers stay within the same
// document); other tags are treated as structure and contribute a line
// break between the text blocks they separate.
inline std::vector<AbstractFragment> parse_abstracts(std::string_view input) {
  using namespace markup_detail;
  std::vector<AbstractFragment> docs;
  Cursor cur{input};

  AbstractFragment* doc = nullptr;
  int wrapper_depth = 0;
  std::vector<std::string> open_tags;
  bool in_entity = false;
  std::string entity_id;
  int entity_begin = 0;
  int entity_open_line = 0;
  std::unordered_set<std::string> seen_ids;

  auto block_break = [&] {
    if (doc && !doc->raw_text.empty() && doc->raw_text.back() != '\n' &&
        !in_entity)
      doc->raw_text += '\n';
  };

  while (!cur.done()) {
    char c = cur.peek();
    if (c == '<') {
      int tag_line = cur.line, tag_col = cur.col;
      Tag tag = parse_tag(cur);
      if (tag.name == "entity") {
        if (tag.closing) {
          if (!in_entity)
            throw ParseError("</entity> without open entity", tag_line,
                             tag_col);
          AbstractFragment::CharSpan span;
          span.id = entity_id;
          span.begin = entity_begin;
          span.end = (int)doc->raw_text.size();
          span.text = doc->raw_text.substr((std::size_t)span.begin,
                                           (std::size_t)(span.end - span.begin));
          doc->entities.push_back(std::move(span));
          in_entity = false;
        } else {
          if (doc == nullptr)
            throw ParseError("<entity> outside any <abstract>/<text> wrapper",
                             tag_line, tag_col);
          if (in_entity)
            throw UnsupportedStructureError(
                "nested <entity> at line " + std::to_string(tag_line) +
                " (inside entity " + entity_id + ")");
          auto it = tag.attrs.find("id");
          if (it == tag.attrs.end())
            throw ParseError("<entity> without id attribute", tag_line,
                             tag_col);
          if (!seen_ids.insert(it->second).second)
            throw ValidationError("duplicate entity id " + it->second);
          if (tag.self_closing)
            throw UnsupportedStructureError("self-closing <entity id=\"" +
                                            it->second + "\"/>");
          in_entity = true;
          entity_id = it->second;
          entity_begin = (int)doc->raw_text.size();
          entity_open_line = tag_line;
        }
      } else if (tag.closing) {
        if (open_tags.empty() || open_tags.back() != tag.name)
          throw ParseError("mismatched closing tag </" + tag.name + ">",
                           tag_line, tag_col);
        if (in_entity)
          throw ParseError("entity " + entity_id + " opened at line " +
                               std::to_string(entity_open_line) +
                               " not closed before </" + tag.name + ">",
                           tag_line, tag_col);
        open_tags.pop_back();
        if (is_wrapper(tag.name)) {
          --wrapper_depth;
          if (wrapper_depth == 0) doc = nullptr;
        } else {
          block_break();
        }
      } else if (tag.self_closing) {
        block_break();
      } else {
        open_tags.push_back(tag.name);
        if (is_wrapper(tag.name)) {
          if (wrapper_depth == 0) {
            docs.emplace_back();
            doc = &docs.back();
            auto it = tag.attrs.find("id");
            if (it != tag.attrs.end()) doc->doc_id = it->second;
            seen_ids.clear();
          } else {
            block_break();
            auto it = tag.attrs.find("id");
            if (it != tag.attrs.end() && doc->doc_id.empty())
              doc->doc_id = it->second;
          }
          ++wrapper_depth;
        } else {
          block_break();
        }
      }
    } else if (c == '&' && doc != nullptr) {
      std::string decoded;
      if (decode_entity_ref(cur, decoded)) {
        doc->raw_text += decoded;
      } else {
        doc->raw_text += c;
        cur.advance();
      }
    } else {
      if (doc != nullptr) {
        // collapse leading whitespace of a fresh document
        if (!(doc->raw_text.empty() && std::isspace((unsigned char)c)))
          doc->raw_text += c;
      } else if (!std::isspace((unsigned char)c)) {
        throw ParseError("text outside <abstract>/<text> wrapper", cur.line,
                         cur.col);
      }
      cur.advance();
    }
  }
  if (!open_tags.empty())
    throw ParseError("unclosed tag <" + open_tags.back() + ">", cur.line,
                     cur.col);

  for (auto& d : docs) {
    int min_keep = 0;
    for (const auto& e : d.entities) min_keep = std::max(min_keep, e.end);
    while ((int)d.raw_text.size() > min_keep &&
           std::isspace((unsigned char)d.raw_text.back()))
      d.raw_text.pop_back();
    if (d.doc_id.empty()) {
      if (!d.entities.empty()) {
        const std::string& id = d.entities.front().id;
        auto dot = id.rfind('.');
        d.doc_id = dot == std::string::npos ? id : id.substr(0, dot);
      } else {
        d.doc_id = "doc";
      }
    }
  }
  return docs;
}

inline AbstractFragment parse_abstract(std::string_view input) {
  auto docs = parse_abstracts(input);
  if (docs.empty())
    throw ParseError("no <abstract>/<text> wrapper found in input");
  if (docs.size() > 1)
    throw ParseError("expected a single document, found " +
                     std::to_string(docs.size()));
  return std::move(docs.front());
}

// Re-emits a fragment as markup (inverse of parse_abstract up to
// whitespace normalization outside entities).
inline std::string to_markup(const AbstractFragment& doc) {
  auto escape = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
      }
    }
    return out;
  };
  std::vector<AbstractFragment::CharSpan> spans = doc.entities;
  std::sort(spans.begin(), spans.end(),
            [](const auto& a, const auto& b) { return a.begin < b.begin; });
  std::string out = "<text id=\"" + doc.doc_id + "\"><abstract>";
  int pos = 0;
  for (const auto& span : spans) {
    out += escape(std::string_view(doc.raw_text)
                      .substr((std::size_t)pos, (std::size_t)(span.begin - pos)));
    out += "<entity id=\"" + span.id + "\">";
    out += escape(std::string_view(doc.raw_text)
                      .substr((std::size_t)span.begin,
                              (std::size_t)(span.end - span.begin)));
    out += "</entity>";
    pos = span.end;
  }
  out += escape(std::string_view(doc.raw_text).substr((std::size_t)pos));
  out += "</abstract></text>";
  return out;
}

// ---------------------------------------------------------------------------
// Relation file grammar: LABEL(ID1,ID2) or LABEL(ID1,ID2,REVERSE), one per
// nonempty line.

inline std::string doc_id_of_entity(const std::string& entity_id) {
  auto dot = entity_id.rfind('.');
  return dot == std::string::npos ? entity_id : entity_id.substr(0, dot);
}

inline std::vector<RelationInstance> parse_relation_file(
    std::string_view text) {
  std::vector<RelationInstance> out;
  int line_no = 0;
  for (const std::string& raw_line : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw_line);
    if (line.empty() || line[0] == '#') continue;
    auto open = line.find('(');
    auto close = line.rfind(')');
    if (open == std::string::npos || close == std::string::npos ||
        close < open || close != line.size() - 1)
      throw ParseError("expected LABEL(ID1,ID2[,REVERSE])", line_no, 1);
    std::string label = trim(line.substr(0, open));
    auto args = split(line.substr(open + 1, close - open - 1), ',');
    for (auto& a : args) a = trim(a);
    bool reverse = false;
    if (args.size() == 3 && args[2] == "REVERSE") {
      reverse = true;
      args.pop_back();
    }
    if (args.size() != 2)
      throw ParseError("expected exactly 2 entity ids in " + label + "(...)",
                       line_no, (int)open + 2);
    auto type = relation_type_from_name(label);
    if (!type)
      throw ValidationError("unknown relation label \"" + label + "\" at line " +
                            std::to_string(line_no));
    if (reverse && !is_directional(*type))
      throw ValidationError(label + " cannot carry REVERSE (line " +
                            std::to_string(line_no) + ")");
    if (args[0].empty() || args[1].empty())
      throw ParseError("empty entity id", line_no, (int)open + 2);
    if (args[0] == args[1])
      throw ValidationError("relation with identical entity ids " + args[0] +
                            " at line " + std::to_string(line_no));
    RelationInstance inst;
    inst.doc_id = doc_id_of_entity(args[0]);
    inst.left_id = args[0];
    inst.right_id = args[1];
    inst.type = *type;
    inst.direction = reverse ? Direction::kReverse : Direction::kForward;
    out.push_back(std::move(inst));
  }
  return out;
}

inline std::string format_relation(const RelationInstance& inst) {
  std::string out = relation_type_name(inst.type);
  out += "(" + inst.left_id + "," + inst.right_id;
  if (inst.direction == Direction::kReverse) out += ",REVERSE";
  out += ")";
  return out;
}

inline std::string format_relation_file(
    const std::vector<RelationInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) out += format_relation(inst) + "\n";
  return out;
}

// Document position of an entity start, for document-order comparisons.
inline std::pair<int, int> entity_position(const EntitySpan& e) {
  return {e.sentence_index, e.token_begin};
}

// Enforces the left-precedes-right invariant against the document: swaps the
// ids (flipping direction for directional labels) when the file listed them
// in reverse document order.
inline RelationInstance normalize_instance(const RelationInstance& inst,
                                           const AnnotatedAbstract& doc) {
  const EntitySpan& a = doc.entity(inst.left_id);
  const EntitySpan& b = doc.entity(inst.right_id);
  if (entity_position(a) <= entity_position(b)) return inst;
  RelationInstance out = inst;
  std::swap(out.left_id, out.right_id);
  if (is_directional(out.type))
    out.direction = out.direction == Direction::kForward ? Direction::kReverse
                                                         : Direction::kForward;
  return out;
}

// ---------------------------------------------------------------------------
// CoNLL-style sidecar: one block per sentence separated by blank lines,
// columns: index, surface, POS, head, deprel (tab or space separated).
// Head 0 marks the root, other heads are 1-based. A `# doc <id>` comment
// starts the annotation section for that document.

inline Sentence parse_conll_sentence(const std::vector<std::string>& lines,
                                     int first_line_no) {
  Sentence sent;
  int expected_index = 1;
  int line_no = first_line_no;
  for (const auto& line : lines) {
    auto cols = split_ws(line);
    if (cols.size() != 5)
      throw ParseError("expected 5 columns (index surface POS head deprel), got " +
                           std::to_string(cols.size()),
                       line_no, 1);
    int index = 0, head = 0;
    try {
      index = std::stoi(cols[0]);
      head = std::stoi(cols[3]);
    } catch (const std::exception&) {
      throw ParseError("non-numeric index or head", line_no, 1);
    }
    if (index != expected_index)
      throw ParseError("token index " + cols[0] + " out of order (expected " +
                           std::to_string(expected_index) + ")",
                       line_no, 1);
    ++expected_index;
    Token tok;
    tok.surface = cols[1];
    tok.pos = cols[2];
    sent.tokens.push_back(std::move(tok));
    sent.heads.push_back(head == 0 ? kRootHead : head - 1);
    sent.deprels.push_back(cols[4]);
    ++line_no;
  }
  return sent;
}

// Validates the head links of one sentence: in-range heads, exactly one
// root, no cycles, everything reachable from the root.
inline void validate_tree(const Sentence& sent, const std::string& context) {
  const int n = sent.size();
  if ((int)sent.heads.size() != n || (int)sent.deprels.size() != n)
    throw TreeValidationError("heads/deprels length mismatch in " + context);
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    int h = sent.heads[i];
    if (h == kRootHead) {
      ++roots;
    } else if (h < 0 || h >= n) {
      throw TreeValidationError("head index " + std::to_string(h) +
                                " out of range in " + context);
    } else if (h == i) {
      throw TreeValidationError("token " + std::to_string(i) +
                                " is its own head in " + context);
    }
  }
  if (roots != 1)
    throw TreeValidationError("expected exactly one root, found " +
                              std::to_string(roots) + " in " + context);
  // walk up from each token; revisiting a token on the same walk is a cycle
  std::vector<int> color(n, 0);
  for (int i = 0; i < n; ++i) {
    int node = i;
    std::vector<int> walk;
    while (node != kRootHead && color[node] == 0) {
      color[node] = 1;
      walk.push_back(node);
      node = sent.heads[node];
    }
    if (node != kRootHead && color[node] == 1)
      throw TreeValidationError("cycle through token " + std::to_string(node) +
                                " in " + context);
    for (int w : walk) color[w] = 2;
  }
}

struct ConllDocument {
  std::string doc_id;  // empty when the sidecar carries no doc markers
  std::vector<Sentence> sentences;
};

inline std::vector<ConllDocument> parse_conll_sidecar(std::string_view text) {
  std::vector<ConllDocument> docs;
  ConllDocument current;
  bool have_current = false;
  std::vector<std::string> block;
  int block_start = 0;
  int line_no = 0;

  auto flush_block = [&] {
    if (block.empty()) return;
    if (!have_current) {
      have_current = true;
    }
    current.sentences.push_back(parse_conll_sentence(block, block_start));
    block.clear();
  };
  auto flush_doc = [&] {
    flush_block();
    if (have_current) {
      docs.push_back(std::move(current));
      current = ConllDocument{};
      have_current = false;
    }
  };

  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) {
      flush_block();
      continue;
    }
    if (line[0] == '#') {
      auto cols = split_ws(line);
      if (cols.size() >= 3 && cols[1] == "doc") {
        flush_doc();
        have_current = true;
        current.doc_id = cols[2];
      }
      continue;
    }
    if (block.empty()) block_start = line_no;
    block.push_back(line);
  }
  flush_doc();
  return docs;
}

// Smoke-test annotations: whitespace tokens, POS "X", flat trees with the
// last token of each line as root.
inline std::vector<Sentence> degenerate_annotations(const std::string& raw_text) {
  std::vector<Sentence> sentences;
  for (const auto& line : split(raw_text, '\n')) {
    auto words = split_ws(line);
    if (words.empty()) continue;
    Sentence sent;
    int n = (int)words.size();
    for (int i = 0; i < n; ++i) {
      Token tok;
      tok.surface = words[(std::size_t)i];
      tok.pos = "X";
      sent.tokens.push_back(std::move(tok));
      sent.heads.push_back(i == n - 1 ? kRootHead : n - 1);
      sent.deprels.push_back(i == n - 1 ? "root" : "dep");
    }
    sentences.push_back(std::move(sent));
  }
  return sentences;
}

// Aligns sidecar tokens to the raw text and maps entity character spans to
// whole-token spans.
inline AnnotatedAbstract attach_annotations(const AbstractFragment& fragment,
                                            std::vector<Sentence> sentences) {
  AnnotatedAbstract doc;
  doc.doc_id = fragment.doc_id;
  doc.raw_text = fragment.raw_text;
  doc.sentences = std::move(sentences);

  const std::string& text = doc.raw_text;
  std::size_t pos = 0;
  int sent_index = 0;
  for (auto& sent : doc.sentences) {
    for (auto& tok : sent.tokens) {
      while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
      if (text.compare(pos, tok.surface.size(), tok.surface) != 0)
        throw AlignmentError(
            "token \"" + tok.surface + "\" (sentence " +
            std::to_string(sent_index) + ") does not match document text at offset " +
            std::to_string(pos) + " in " + doc.doc_id);
      tok.char_begin = (int)pos;
      pos += tok.surface.size();
      tok.char_end = (int)pos;
    }
    validate_tree(sent, "sentence " + std::to_string(sent_index) + " of " +
                            doc.doc_id);
    ++sent_index;
  }
  while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  if (pos != text.size())
    throw AlignmentError("document text of " + doc.doc_id +
                         " has unannotated content from offset " +
                         std::to_string(pos));

  for (const auto& span : fragment.entities) {
    // markup may include stray whitespace inside the tags
    int begin = span.begin, end = span.end;
    while (begin < end && std::isspace((unsigned char)text[(std::size_t)begin]))
      ++begin;
    while (end > begin && std::isspace((unsigned char)text[(std::size_t)end - 1]))
      --end;
    if (begin >= end)
      throw AlignmentError("entity " + span.id + " covers no text");

    // locate the token covering the span start
    int sent_idx = -1, tok_begin = -1;
    for (int s = 0; s < (int)doc.sentences.size() && sent_idx < 0; ++s) {
      const auto& sent = doc.sentences[(std::size_t)s];
      for (int t = 0; t < sent.size(); ++t) {
        const Token& tok = sent.tokens[(std::size_t)t];
        if (begin >= tok.char_begin && begin < tok.char_end) {
          sent_idx = s;
          tok_begin = t;
          break;
        }
      }
    }
    if (sent_idx < 0)
      throw AlignmentError("entity " + span.id + " [" + std::to_string(begin) +
                           "," + std::to_string(end) +
                           ") lies outside all tokens of " + doc.doc_id);
    const auto& sent = doc.sentences[(std::size_t)sent_idx];
    if (sent.tokens[(std::size_t)tok_begin].char_begin != begin)
      throw AlignmentError("entity " + span.id + " starts mid-token \"" +
                           sent.tokens[(std::size_t)tok_begin].surface +
                           "\" in " + doc.doc_id);
    int tok_end = -1;
    for (int t = tok_begin; t < sent.size(); ++t) {
      const Token& tok = sent.tokens[(std::size_t)t];
      if (tok.char_end == end) {
        tok_end = t + 1;
        break;
      }
      if (tok.char_end > end)
        throw AlignmentError("entity " + span.id + " ends mid-token \"" +
                             tok.surface + "\" in " + doc.doc_id);
    }
    if (tok_end < 0)
      throw AlignmentError("entity " + span.id +
                           " crosses a sentence boundary in " + doc.doc_id);

    EntitySpan entity;
    entity.id = span.id;
    entity.sentence_index = sent_idx;
    entity.token_begin = tok_begin;
    entity.token_end = tok_end;
    std::vector<std::string> surfaces;
    for (int t = entity.token_begin; t < entity.token_end; ++t)
      surfaces.push_back(sent.tokens[(std::size_t)t].surface);
    entity.text = join(surfaces, " ");
    doc.entities.push_back(std::move(entity));
  }

  std::sort(doc.entities.begin(), doc.entities.end(),
            [](const EntitySpan& a, const EntitySpan& b) {
              return std::tuple(a.sentence_index, a.token_begin, a.token_end,
                                a.id) < std::tuple(b.sentence_index,
                                                   b.token_begin, b.token_end,
                                                   b.id);
            });
  std::unordered_set<std::string> ids;
  for (const auto& e : doc.entities)
    if (!ids.insert(e.id).second)
      throw ValidationError("duplicate entity id " + e.id + " in " + doc.doc_id);
  return doc;
}

// ---------------------------------------------------------------------------
// Canonical record file: UTF-8, one JSON document per line, stable field
// order.

inline nlohmann::ordered_json document_to_json(const AnnotatedAbstract& doc) {
  nlohmann::ordered_json j;
  j["doc_id"] = doc.doc_id;
  j["raw_text"] = doc.raw_text;
  j["sentences"] = nlohmann::ordered_json::array();
  for (const auto& sent : doc.sentences) {
    nlohmann::ordered_json js;
    js["tokens"] = nlohmann::ordered_json::array();
    for (const auto& tok : sent.tokens) {
      nlohmann::ordered_json jt;
      jt["surface"] = tok.surface;
      jt["pos"] = tok.pos;
      jt["begin"] = tok.char_begin;
      jt["end"] = tok.char_end;
      js["tokens"].push_back(std::move(jt));
    }
    js["heads"] = sent.heads;
    js["deprels"] = sent.deprels;
    j["sentences"].push_back(std::move(js));
  }
  j["entities"] = nlohmann::ordered_json::array();
  for (const auto& e : doc.entities) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["sentence"] = e.sentence_index;
    je["begin"] = e.token_begin;
    je["end"] = e.token_end;
    je["text"] = e.text;
    j["entities"].push_back(std::move(je));
  }
  return j;
}

inline AnnotatedAbstract document_from_json(const nlohmann::json& j) {
  AnnotatedAbstract doc;
  try {
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.raw_text = j.at("raw_text").get<std::string>();
    for (const auto& js : j.at("sentences")) {
      Sentence sent;
      for (const auto& jt : js.at("tokens")) {
        Token tok;
        tok.surface = jt.at("surface").get<std::string>();
        tok.pos = jt.at("pos").get<std::string>();
        tok.char_begin = jt.at("begin").get<int>();
        tok.char_end = jt.at("end").get<int>();
        sent.tokens.push_back(std::move(tok));
      }
      sent.heads = js.at("heads").get<std::vector<int>>();
      sent.deprels = js.at("deprels").get<std::vector<std::string>>();
      doc.sentences.push_back(std::move(sent));
    }
    for (const auto& je : j.at("entities")) {
      EntitySpan e;
      e.id = je.at("id").get<std::string>();
      e.sentence_index = je.at("sentence").get<int>();
      e.token_begin = je.at("begin").get<int>();
      e.token_end = je.at("end").get<int>();
      e.text = je.at("text").get<std::string>();
      doc.entities.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad document record: ") + e.what());
  }
  for (int s = 0; s < (int)doc.sentences.size(); ++s)
    validate_tree(doc.sentences[(std::size_t)s],
                  "sentence " + std::to_string(s) + " of " + doc.doc_id);
  return doc;
}

inline std::string documents_to_jsonl(
    const std::vector<AnnotatedAbstract>& docs) {
  std::string out;
  for (const auto& doc : docs) out += document_to_json(doc).dump() + "\n";
  return out;
}

inline std::vector<AnnotatedAbstract> documents_from_jsonl(
    std::string_view text) {
  std::vector<AnnotatedAbstract> docs;
  int line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw FormatError("invalid JSON record at line " +
                        std::to_string(line_no));
    docs.push_back(document_from_json(j));
  }
  return docs;
}

}  // namespace scirel
