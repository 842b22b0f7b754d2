#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hrvson {

// Minimal TOML-flavoured key/value text: "[section]" headers, "key = value"
// lines, '#' comments, values optionally quoted or written as "[a, b, c]".
// Keys may repeat.
struct KeyValueEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::string source;

  // "source:line ('key')" for error messages.
  std::string where() const;
};

std::vector<KeyValueEntry> parse_key_values(std::string_view text, std::string_view source);

// Strips quotes from a scalar value.
std::string kv_string(const KeyValueEntry& e);
double kv_number(const KeyValueEntry& e);
bool kv_bool(const KeyValueEntry& e);
// Items of a "[a, b, c]" list (quotes stripped); a bare scalar yields one item.
std::vector<std::string> kv_list(const KeyValueEntry& e);

}  // namespace hrvson
