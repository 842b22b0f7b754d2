#include "hrvson/keyvalue.hpp"

#include "hrvson/error.hpp"
#include "hrvson/text.hpp"

namespace hrvson {

namespace {

std::string unquote(std::string_view v) {
  v = text::trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

// Drops a trailing '#' comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

std::string KeyValueEntry::where() const {
  return source + ":" + std::to_string(line) + " ('" + key + "')";
}

std::vector<KeyValueEntry> parse_key_values(std::string_view text, std::string_view source) {
  std::vector<KeyValueEntry> out;
  std::string section;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text::trim(strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto loc = std::string(source) + ":" + std::to_string(line_no);
    if (line.front() == '[' && line.find('=') == std::string_view::npos) {
      if (line.back() != ']') throw ConfigError(loc + ": malformed section header");
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(loc + ": expected 'key = value'");
    KeyValueEntry e;
    e.section = section;
    e.key = std::string(text::trim(line.substr(0, eq)));
    e.value = std::string(text::trim(line.substr(eq + 1)));
    e.line = line_no;
    e.source = std::string(source);
    if (e.key.empty()) throw ConfigError(loc + ": empty key");
    out.push_back(std::move(e));
  }
  return out;
}

std::string kv_string(const KeyValueEntry& e) { return unquote(e.value); }

double kv_number(const KeyValueEntry& e) {
  const auto v = text::parse_double(kv_string(e));
  if (!v) throw ConfigError(e.where() + ": expected a number, got '" + e.value + "'");
  return *v;
}

bool kv_bool(const KeyValueEntry& e) {
  const auto s = kv_string(e);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(e.where() + ": expected true or false, got '" + e.value + "'");
}

std::vector<std::string> kv_list(const KeyValueEntry& e) {
  std::string_view v = text::trim(e.value);
  if (v.empty() || v.front() != '[') return {unquote(v)};
  if (v.back() != ']') throw ConfigError(e.where() + ": unterminated list");
  v = v.substr(1, v.size() - 2);
  std::vector<std::string> items;
  for (auto item : text::split_csv(v)) {
    if (!item.empty()) items.push_back(unquote(item));
  }
  return items;
}

}  // namespace hrvson
