#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stqmle/model.hpp"

namespace stqmle::io {

// Long format with header `cell_id,time,y,x1,...,xk`, one row per
// (cell, time) pair in any order. Ids must be dense in [0, N) and times in
// [0, T); a missing or repeated pair, a non-numeric token or a non-finite
// value is a ParseError.
PanelData ReadPanelCsv(std::istream& in, const std::string& source = "<stream>");
PanelData ReadPanelCsvFile(const std::filesystem::path& path);

// Rows ordered by time, then cell; values in shortest round-trip form.
void WritePanelCsv(std::ostream& out, const PanelData& data);
std::string PanelCsvString(const PanelData& data);

}  // namespace stqmle::io
