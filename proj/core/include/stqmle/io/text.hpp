#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace stqmle::io {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);

// Whole-number or floating token; false on trailing garbage.
bool ParseDouble(std::string_view token, double* out);
bool ParseInt(std::string_view token, long long* out);

// Writes to a sibling temporary file and renames it over `path`. Throws kIo.
void AtomicWrite(const std::filesystem::path& path, const std::string& content);

// Throws kIo when the file cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Flat `key = value` text. Blank lines and lines starting with '#' are
// skipped; keys must be unique and `schema_version` must be present and equal
// `expected_schema`. ParseError on malformed lines.
std::map<std::string, std::string> ParseConfig(std::istream& in, const std::string& source,
                                               int expected_schema = 1);

// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string Fnv1a(std::string_view bytes);

}  // namespace stqmle::io
