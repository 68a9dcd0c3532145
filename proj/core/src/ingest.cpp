#include "cotagnet/ingest.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "cotagnet/error.hpp"

namespace cotagnet {
namespace {

constexpr std::size_t kMaxIssues = 20;

void note_issue(CommunityDataset& ds, std::string msg) {
  if (ds.issues.size() < kMaxIssues) ds.issues.push_back(std::move(msg));
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

using Attributes = std::vector<std::pair<std::string, std::string>>;

const std::string* find_attr(const Attributes& attrs, std::string_view name) {
  for (const auto& [k, v] : attrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

// Row-at-a-time XML tokenizer. Handles declarations, comments, CDATA,
// DOCTYPE, nested elements and entity references; reports every element
// named `row` to the callback.
class XmlRowReader {
 public:
  explicit XmlRowReader(std::istream& in) : in_(in) {}

  template <typename OnRow>
  void run(OnRow&& on_row) {
    bool saw_root = false;
    std::vector<std::string> open;
    while (true) {
      int c = get();
      if (c == kEof) break;
      if (c != '<') {
        if (open.empty() && !is_space(static_cast<char>(c))) {
          fail("text outside the root element");
        }
        continue;
      }
      const std::uint64_t start = offset_ - 1;
      c = get();
      if (c == '?') {
        skip_until("?>");
      } else if (c == '!') {
        if (try_consume("--")) {
          skip_until("-->");
        } else if (try_consume("[CDATA[")) {
          skip_until("]]>");
        } else {
          skip_doctype();
        }
      } else if (c == '/') {
        std::string name = read_name();
        skip_spaces();
        expect('>');
        if (open.empty() || open.back() != name) {
          fail_at("unmatched closing tag </" + name + ">", start);
        }
        open.pop_back();
      } else if (c != kEof && is_name_start(static_cast<char>(c))) {
        unget();
        if (open.empty() && saw_root) fail_at("second root element", start);
        saw_root = true;
        std::string name = read_name();
        Attributes attrs;
        bool self_closing = false;
        while (true) {
          const bool had_space = skip_spaces();
          int d = get();
          if (d == '/') {
            expect('>');
            self_closing = true;
            break;
          }
          if (d == '>') break;
          if (d == kEof) fail("unexpected end of input inside <" + name + ">");
          if (!had_space) fail("expected whitespace before attribute in <" + name + ">");
          unget();
          std::string key = read_name();
          skip_spaces();
          expect('=');
          skip_spaces();
          std::string value = read_quoted();
          if (find_attr(attrs, key) != nullptr) fail("duplicate attribute '" + key + "'");
          attrs.emplace_back(std::move(key), std::move(value));
        }
        if (name == "row") on_row(attrs, start);
        if (!self_closing) open.push_back(std::move(name));
      } else {
        fail_at("invalid markup after '<'", start);
      }
    }
    if (!open.empty()) fail("unexpected end of input: <" + open.back() + "> not closed");
    if (!saw_root) fail("no root element");
  }

 private:
  static constexpr int kEof = -1;

  int get() {
    if (pos_ == len_) {
      if (!refill()) return kEof;
    }
    ++offset_;
    return static_cast<unsigned char>(buf_[pos_++]);
  }

  // Only valid directly after a successful get().
  void unget() {
    --pos_;
    --offset_;
  }

  bool refill() {
    if (!in_.good()) {
      if (in_.bad()) throw ParseError("read error", offset_);
      return false;
    }
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    len_ = static_cast<std::size_t>(in_.gcount());
    pos_ = 0;
    if (in_.bad()) throw ParseError("read error", offset_);
    return len_ > 0;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("XML: " + msg, offset_); }
  [[noreturn]] static void fail_at(const std::string& msg, std::uint64_t at) {
    throw ParseError("XML: " + msg, at);
  }

  bool skip_spaces() {
    bool any = false;
    while (true) {
      int c = get();
      if (c == kEof) return any;
      if (!is_space(static_cast<char>(c))) {
        unget();
        return any;
      }
      any = true;
    }
  }

  void expect(char want) {
    int c = get();
    if (c != static_cast<unsigned char>(want)) {
      if (c == kEof) fail(std::string("unexpected end of input, expected '") + want + "'");
      fail(std::string("expected '") + want + "'");
    }
  }

  // Consumes `lit` if the input continues with it. Literals used here are
  // short and start with distinct characters, so a partial match means the
  // markup is invalid.
  bool try_consume(std::string_view lit) {
    int c = get();
    if (c != static_cast<unsigned char>(lit[0])) {
      if (c != kEof) unget();
      return false;
    }
    for (std::size_t i = 1; i < lit.size(); ++i) {
      if (get() != static_cast<unsigned char>(lit[i])) fail("malformed markup declaration");
    }
    return true;
  }

  void skip_until(std::string_view terminator) {
    std::size_t matched = 0;
    while (matched < terminator.size()) {
      int c = get();
      if (c == kEof) fail("unexpected end of input, expected '" + std::string(terminator) + "'");
      if (c == static_cast<unsigned char>(terminator[matched])) {
        ++matched;
      } else {
        matched = (c == static_cast<unsigned char>(terminator[0])) ? 1 : 0;
      }
    }
  }

  void skip_doctype() {
    int depth = 0;
    while (true) {
      int c = get();
      if (c == kEof) fail("unexpected end of input in declaration");
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth <= 0) return;
    }
  }

  std::string read_name() {
    std::string name;
    int c = get();
    if (c == kEof || !is_name_start(static_cast<char>(c))) fail("expected a name");
    name += static_cast<char>(c);
    while (true) {
      c = get();
      if (c == kEof) break;
      if (!is_name_char(static_cast<char>(c))) {
        unget();
        break;
      }
      name += static_cast<char>(c);
    }
    return name;
  }

  std::string read_quoted() {
    int q = get();
    if (q != '"' && q != '\'') fail("expected quoted attribute value");
    std::string value;
    while (true) {
      int c = get();
      if (c == kEof) fail("unterminated attribute value");
      if (c == q) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        read_entity(value);
      } else {
        value += static_cast<char>(c);
      }
    }
    return value;
  }

  void read_entity(std::string& out) {
    std::string ref;
    while (true) {
      int c = get();
      if (c == kEof) fail("unterminated entity reference");
      if (c == ';') break;
      ref += static_cast<char>(c);
      if (ref.size() > 10) fail("entity reference too long");
    }
    if (ref == "lt") {
      out += '<';
    } else if (ref == "gt") {
      out += '>';
    } else if (ref == "amp") {
      out += '&';
    } else if (ref == "quot") {
      out += '"';
    } else if (ref == "apos") {
      out += '\'';
    } else if (ref.size() > 1 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      std::string_view digits(ref);
      digits.remove_prefix(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      std::uint32_t cp = 0;
      for (char d : digits) {
        int v;
        if (d >= '0' && d <= '9') {
          v = d - '0';
        } else if (hex && d >= 'a' && d <= 'f') {
          v = d - 'a' + 10;
        } else if (hex && d >= 'A' && d <= 'F') {
          v = d - 'A' + 10;
        } else {
          fail("bad character reference &" + ref + ";");
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + ref + ";");
    }
  }

  std::istream& in_;
  std::array<char, 1 << 16> buf_{};
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::uint64_t offset_ = 0;
};

// Shared acceptance rules for a parsed question.
bool accept_record(CommunityDataset& ds, std::unordered_set<std::string>& ids,
                   QuestionRecord rec, const std::string& where, std::size_t max_tags) {
  if (rec.tags.empty() || rec.tags.size() > max_tags) {
    ++ds.stats.rejected_tag_count;
    note_issue(ds, where + ": " + std::to_string(rec.tags.size()) + " tags (allowed 1-" +
                       std::to_string(max_tags) + ")");
    return false;
  }
  for (const auto& tag : rec.tags) {
    if (!valid_tag_name(tag)) {
      ++ds.stats.malformed;
      note_issue(ds, where + ": invalid tag name '" + tag + "'");
      return false;
    }
  }
  if (!ids.insert(rec.question_id).second) {
    throw DataError(ds.name + ": duplicate question id '" + rec.question_id + "' (" + where + ")");
  }
  ds.records.push_back(std::move(rec));
  return true;
}

}  // namespace

bool valid_tag_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == '<' || c == '>' || c == ',' || c == '|' || is_space(c);
  });
}

std::vector<std::string> decode_tag_attribute(std::string_view raw) {
  std::vector<std::string> tags;
  if (raw.empty()) return tags;

  if (raw.front() == '|') {
    if (raw.size() < 2 || raw.back() != '|') {
      throw ParseError("unbalanced tag list '" + std::string(raw) + "'");
    }
    std::size_t start = 1;
    while (start < raw.size()) {
      const std::size_t bar = raw.find('|', start);
      std::string_view name = raw.substr(start, bar - start);
      if (name.empty()) throw ParseError("empty tag in '" + std::string(raw) + "'");
      tags.emplace_back(name);
      start = bar + 1;
    }
    return tags;
  }

  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '<') {
      const std::size_t next = raw.find('<', i);
      throw ParseError("unexpected text '" + std::string(raw.substr(i, next - i)) +
                       "' in tag list");
    }
    const std::size_t close = raw.find('>', i + 1);
    const std::size_t reopen = raw.find('<', i + 1);
    if (close == std::string_view::npos || (reopen != std::string_view::npos && reopen < close)) {
      const std::size_t end = reopen == std::string_view::npos ? raw.size() : reopen;
      throw ParseError("unbalanced bracket in '" + std::string(raw.substr(i, end - i)) + "'");
    }
    if (close == i + 1) throw ParseError("empty tag '<>' in tag list");
    tags.emplace_back(raw.substr(i + 1, close - i - 1));
    i = close + 1;
  }
  return tags;
}

CommunityDataset parse_posts_xml(std::istream& in, std::string_view community_name) {
  if (!in) throw ParseError("unreadable stream", 0);
  CommunityDataset ds;
  ds.name = std::string(community_name);
  std::unordered_set<std::string> ids;

  XmlRowReader reader(in);
  reader.run([&](const Attributes& attrs, std::uint64_t offset) {
    ++ds.stats.rows;
    const std::string where = "row at byte " + std::to_string(offset);
    const std::string* type = find_attr(attrs, "PostTypeId");
    const std::string* id = find_attr(attrs, "Id");
    if (type == nullptr || id == nullptr || id->empty()) {
      ++ds.stats.malformed;
      note_issue(ds, where + ": missing Id or PostTypeId");
      return;
    }
    if (*type != "1") {
      ++ds.stats.skipped_non_question;
      return;
    }
    const std::string* raw_tags = find_attr(attrs, "Tags");
    if (raw_tags == nullptr || raw_tags->empty()) {
      ++ds.stats.skipped_untagged;
      return;
    }
    QuestionRecord rec;
    rec.question_id = *id;
    try {
      rec.tags = decode_tag_attribute(*raw_tags);
    } catch (const ParseError& e) {
      ++ds.stats.malformed;
      note_issue(ds, where + ": " + e.what());
      return;
    }
    accept_record(ds, ids, std::move(rec), where, kMaxTagsPerQuestion);
  });
  return ds;
}

CommunityDataset parse_tsv(std::istream& in, std::string_view community_name,
                           std::size_t max_tags) {
  if (!in) throw ParseError("unreadable stream", 0);
  CommunityDataset ds;
  ds.name = std::string(community_name);
  std::unordered_set<std::string> ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    ++ds.stats.rows;
    const std::string where = "line " + std::to_string(line_no);

    const std::size_t tab = line.find('\t');
    QuestionRecord rec;
    rec.question_id = line.substr(0, tab);
    if (rec.question_id.empty()) {
      ++ds.stats.malformed;
      note_issue(ds, where + ": empty question id");
      continue;
    }
    if (tab != std::string::npos && tab + 1 < line.size()) {
      std::string_view rest(line);
      rest.remove_prefix(tab + 1);
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = rest.find(',', start);
        rec.tags.emplace_back(rest.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    }
    accept_record(ds, ids, std::move(rec), where, max_tags);
  }
  if (in.bad()) throw ParseError("read error after line " + std::to_string(line_no));
  return ds;
}

BuildResult build_bipartite(const CommunityDataset& dataset) {
  std::vector<std::string> names;
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& rec : dataset.records) {
      for (const auto& tag : rec.tags) {
        if (seen.insert(tag).second) names.push_back(tag);
      }
    }
  }
  std::sort(names.begin(), names.end());
  std::unordered_map<std::string_view, TagId> id_of;
  id_of.reserve(names.size());
  for (TagId t = 0; t < names.size(); ++t) id_of.emplace(names[t], t);

  BuildResult result;
  std::vector<std::vector<QuestionIndex>> incidence(names.size());
  std::vector<std::string> question_ids;
  question_ids.reserve(dataset.records.size());
  std::vector<TagId> ids;
  for (const auto& rec : dataset.records) {
    const auto q = static_cast<QuestionIndex>(question_ids.size());
    ids.clear();
    for (const auto& tag : rec.tags) ids.push_back(id_of.at(tag));
    std::sort(ids.begin(), ids.end());
    const auto last = std::unique(ids.begin(), ids.end());
    result.duplicate_tags += static_cast<std::size_t>(ids.end() - last);
    ids.erase(last, ids.end());
    for (TagId t : ids) incidence[t].push_back(q);
    question_ids.push_back(rec.question_id);
  }
  result.graph =
      BipartiteTagGraph(std::move(names), std::move(question_ids), std::move(incidence));
  return result;
}

void write_canonical_tsv(std::ostream& out, const BipartiteTagGraph& graph) {
  const QuestionTags qt = graph.question_tags();
  const auto& ids = graph.question_ids();
  std::string line;
  for (QuestionIndex q = 0; q < qt.n_questions(); ++q) {
    line.assign(ids[q]);
    line += '\t';
    bool first = true;
    for (TagId t : qt.of(q)) {
      if (!first) line += ',';
      line += graph.tag_name(t);
      first = false;
    }
    line += '\n';
    out << line;
  }
}

}  // namespace cotagnet
