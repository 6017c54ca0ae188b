#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace stqmle::io::detail {

struct Token {
  std::string_view text;
  std::int64_t column;  // 1-based
};

// Splits on runs of spaces and tabs.
inline std::vector<Token> SplitWhitespace(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t b = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(b, i - b), static_cast<std::int64_t>(b + 1)});
  }
  return out;
}

// Splits on commas; surrounding spaces are trimmed from each field.
inline std::vector<Token> SplitCsv(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<Token> out;
  std::size_t b = 0;
  for (;;) {
    const std::size_t e = line.find(',', b);
    std::string_view f = line.substr(b, e == std::string_view::npos ? line.npos : e - b);
    std::size_t lead = 0;
    while (lead < f.size() && f[lead] == ' ') ++lead;
    f.remove_prefix(lead);
    while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
    out.push_back({f, static_cast<std::int64_t>(b + lead + 1)});
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

}  // namespace stqmle::io::detail
