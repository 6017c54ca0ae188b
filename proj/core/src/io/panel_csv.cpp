#include "stqmle/io/panel_csv.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "stqmle/io/text.hpp"
#include "tokens.hpp"

namespace stqmle::io {

PanelData ReadPanelCsv(std::istream& in, const std::string& source) {
  std::string line;
  std::int64_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, 1, "empty file");
  ++line_no;
  const auto header = detail::SplitCsv(line);
  if (header.size() < 3 || header[0].text != "cell_id" || header[1].text != "time" ||
      header[2].text != "y") {
    throw ParseError(source, 1, 1, "header must start with cell_id,time,y");
  }
  const Index k = static_cast<Index>(header.size()) - 3;
  for (Index j = 0; j < k; ++j) {
    const auto& h = header[static_cast<std::size_t>(j + 3)];
    if (h.text != "x" + std::to_string(j + 1)) {
      throw ParseError(source, 1, h.column,
                       "expected column 'x" + std::to_string(j + 1) + "', got '" +
                           std::string(h.text) + "'");
    }
  }

  struct Row {
    long long cell, time;
    std::int64_t line;
  };
  std::vector<Row> rows;
  std::vector<double> values;  // y, x1..xk per row
  long long max_cell = -1, max_time = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto tok = detail::SplitCsv(line);
    if (static_cast<Index>(tok.size()) != k + 3) {
      throw ParseError(source, line_no, 1,
                       "expected " + std::to_string(k + 3) + " fields, got " +
                           std::to_string(tok.size()));
    }
    Row r{0, 0, line_no};
    if (!ParseInt(tok[0].text, &r.cell) || r.cell < 0) {
      throw ParseError(source, line_no, tok[0].column,
                       "cell_id must be a non-negative integer, got '" +
                           std::string(tok[0].text) + "'");
    }
    if (!ParseInt(tok[1].text, &r.time) || r.time < 0) {
      throw ParseError(source, line_no, tok[1].column,
                       "time must be a non-negative integer, got '" + std::string(tok[1].text) +
                           "'");
    }
    for (std::size_t f = 2; f < tok.size(); ++f) {
      double v = 0.0;
      if (!ParseDouble(tok[f].text, &v)) {
        throw ParseError(source, line_no, tok[f].column,
                         "not a number: '" + std::string(tok[f].text) + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(source, line_no, tok[f].column,
                         "non-finite value '" + std::string(tok[f].text) + "'");
      }
      values.push_back(v);
    }
    max_cell = std::max(max_cell, r.cell);
    max_time = std::max(max_time, r.time);
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError(source, line_no, 1, "no data rows");

  const Index n = max_cell + 1, t_len = max_time + 1;
  if (static_cast<double>(n) * static_cast<double>(t_len) > 4e9) {
    throw ParseError(source, line_no, 1, "cell_id/time range too large");
  }
  std::vector<std::int64_t> seen(static_cast<std::size_t>(n * t_len), 0);
  std::vector<double> y(static_cast<std::size_t>(n * t_len));
  std::vector<double> x(static_cast<std::size_t>(n * t_len * k));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    const std::size_t slot = static_cast<std::size_t>(row.time * n + row.cell);
    if (seen[slot] != 0) {
      throw ParseError(source, row.line, 1,
                       "duplicate observation for cell_id=" + std::to_string(row.cell) +
                           ", time=" + std::to_string(row.time) + " (first on line " +
                           std::to_string(seen[slot]) + ")");
    }
    seen[slot] = row.line;
    const double* v = values.data() + r * static_cast<std::size_t>(k + 1);
    y[slot] = v[0];
    for (Index j = 0; j < k; ++j) {
      x[static_cast<std::size_t>((row.time * k + j) * n + row.cell)] = v[j + 1];
    }
  }
  for (Index t = 0; t < t_len; ++t) {
    for (Index i = 0; i < n; ++i) {
      if (seen[static_cast<std::size_t>(t * n + i)] == 0) {
        throw Error(ErrorCode::kParse, source + ": missing observation for cell_id=" +
                                           std::to_string(i) + ", time=" + std::to_string(t) +
                                           " (ids must be dense in [0, " + std::to_string(n) +
                                           ") and times in [0, " + std::to_string(t_len) + "))");
      }
    }
  }
  return PanelData(n, t_len, k, std::move(y), std::move(x));
}

PanelData ReadPanelCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadPanelCsv(in, path.string());
}

void WritePanelCsv(std::ostream& out, const PanelData& data) {
  out << "cell_id,time,y";
  for (Index j = 0; j < data.k(); ++j) out << ",x" << j + 1;
  out << '\n';
  std::string row;
  for (Index t = 0; t < data.T(); ++t) {
    for (Index i = 0; i < data.N(); ++i) {
      row.clear();
      row += std::to_string(i);
      row += ',';
      row += std::to_string(t);
      row += ',';
      row += FormatDouble(data.y(t)[i]);
      for (Index j = 0; j < data.k(); ++j) {
        row += ',';
        row += FormatDouble(data.x(t, j)[i]);
      }
      row += '\n';
      out << row;
    }
  }
}

std::string PanelCsvString(const PanelData& data) {
  std::ostringstream os;
  WritePanelCsv(os, data);
  return os.str();
}

}  // namespace stqmle::io
