#include "stqmle/io/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "stqmle/io/text.hpp"
#include "tokens.hpp"

namespace stqmle::io {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

SymSparseMatrix ReadMatrixMarket(std::istream& in, const std::string& source) {
  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, 1, "empty file");
  ++line_no;
  const auto head = detail::SplitWhitespace(line);
  if (head.size() != 5 || Lower(head[0].text) != "%%matrixmarket") {
    throw ParseError(source, 1, 1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  if (Lower(head[1].text) != "matrix") {
    throw ParseError(source, 1, head[1].column, "object must be 'matrix'");
  }
  if (Lower(head[2].text) != "coordinate") {
    throw ParseError(source, 1, head[2].column, "only the coordinate format is supported");
  }
  const std::string field = Lower(head[3].text);
  if (field != "real" && field != "integer" && field != "pattern") {
    throw ParseError(source, 1, head[3].column,
                     "field must be real, integer or pattern, got '" + field + "'");
  }
  const std::string symmetry = Lower(head[4].text);
  if (symmetry != "symmetric" && symmetry != "general") {
    throw ParseError(source, 1, head[4].column,
                     "symmetry must be symmetric or general, got '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool general = symmetry == "general";

  // Size line, after comments.
  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::SplitWhitespace(line);
    if (tok.empty() || tok[0].text.front() == '%') continue;
    if (tok.size() != 3) throw ParseError(source, line_no, 1, "expected 'rows cols entries'");
    for (int i = 0; i < 3; ++i) {
      long long* dst = i == 0 ? &rows : i == 1 ? &cols : &nnz;
      if (!ParseInt(tok[i].text, dst) || *dst < 0) {
        throw ParseError(source, line_no, tok[i].column,
                         "expected a non-negative integer, got '" + std::string(tok[i].text) + "'");
      }
    }
    break;
  }
  if (rows < 0) throw ParseError(source, line_no + 1, 1, "missing size line");
  if (rows != cols) {
    throw ParseError(source, line_no, 1,
                     "weight matrix must be square, got " + std::to_string(rows) + " x " +
                         std::to_string(cols));
  }

  struct Entry {
    double value;
    std::int64_t line;
  };
  std::map<std::pair<Index, Index>, Entry> entries;
  long long read = 0;
  while (read < nnz && std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::SplitWhitespace(line);
    if (tok.empty() || tok[0].text.front() == '%') continue;
    const std::size_t want = pattern ? 2 : 3;
    if (tok.size() != want) {
      throw ParseError(source, line_no, 1,
                       "expected " + std::to_string(want) + " fields, got " +
                           std::to_string(tok.size()));
    }
    long long i = 0, j = 0;
    if (!ParseInt(tok[0].text, &i) || i < 1 || i > rows) {
      throw ParseError(source, line_no, tok[0].column,
                       "row index '" + std::string(tok[0].text) + "' outside [1, " +
                           std::to_string(rows) + "]");
    }
    if (!ParseInt(tok[1].text, &j) || j < 1 || j > cols) {
      throw ParseError(source, line_no, tok[1].column,
                       "column index '" + std::string(tok[1].text) + "' outside [1, " +
                           std::to_string(cols) + "]");
    }
    double v = 1.0;
    if (!pattern) {
      if (!ParseDouble(tok[2].text, &v) || !std::isfinite(v)) {
        throw ParseError(source, line_no, tok[2].column,
                         "invalid value '" + std::string(tok[2].text) + "'");
      }
    }
    if (!general && i == j && v != 0.0) {
      throw ParseError(source, line_no, tok[0].column, "weight matrix must have a zero diagonal");
    }
    // Symmetric files store one triangle; fold both orientations onto (max, min).
    std::pair<Index, Index> key{i - 1, j - 1};
    if (!general && key.first < key.second) std::swap(key.first, key.second);
    if (!entries.emplace(key, Entry{v, line_no}).second) {
      throw ParseError(source, line_no, tok[0].column,
                       "duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    ++read;
  }
  if (read < nnz) {
    throw ParseError(source, line_no + 1, 1,
                     "expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));
  }

  std::vector<Triplet> triplets;
  triplets.reserve(entries.size());
  if (general) {
    for (const auto& [key, e] : entries) {
      const auto mirror = entries.find({key.second, key.first});
      const bool matched = mirror != entries.end() && mirror->second.value == e.value;
      if (!matched) {
        std::ostringstream os;
        os << "asymmetric entry at (" << key.first + 1 << ", " << key.second + 1
           << ") = " << FormatDouble(e.value) << ": ";
        if (mirror == entries.end()) {
          os << "(" << key.second + 1 << ", " << key.first + 1 << ") is missing";
        } else {
          os << "(" << key.second + 1 << ", " << key.first + 1
             << ") = " << FormatDouble(mirror->second.value);
        }
        throw ParseError(source, e.line, 1, os.str());
      }
      if (key.first == key.second && e.value != 0.0) {
        throw ParseError(source, e.line, 1, "weight matrix must have a zero diagonal");
      }
      if (key.first >= key.second) triplets.push_back({key.first, key.second, e.value});
    }
  } else {
    for (const auto& [key, e] : entries) triplets.push_back({key.first, key.second, e.value});
  }
  return SymSparseMatrix::FromTriangle(static_cast<Index>(rows), triplets);
}

SymSparseMatrix ReadMatrixMarketFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadMatrixMarket(in, path.string());
}

void WriteMatrixMarket(std::ostream& out, const SymSparseMatrix& w) {
  std::vector<Triplet> lower;
  for (Index i = 0; i < w.dim(); ++i) {
    const auto cols = w.row_cols(i);
    const auto vals = w.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (cols[p] <= i) lower.push_back({i, cols[p], vals[p]});
    }
  }
  std::sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << w.dim() << ' ' << w.dim() << ' ' << lower.size() << '\n';
  for (const Triplet& t : lower) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << FormatDouble(t.value) << '\n';
  }
}

std::string MatrixMarketString(const SymSparseMatrix& w) {
  std::ostringstream os;
  WriteMatrixMarket(os, w);
  return os.str();
}

}  // namespace stqmle::io
