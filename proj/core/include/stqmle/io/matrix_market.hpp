#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stqmle/sparse/sym_sparse_matrix.hpp"

namespace stqmle::io {

// Coordinate Matrix Market (real, integer or pattern; symmetric or general).
// A general file must list both triangles with equal values; the first
// unmatched entry is reported with its 1-based coordinate and line. Errors are
// ParseError with line and column.
SymSparseMatrix ReadMatrixMarket(std::istream& in, const std::string& source = "<stream>");
SymSparseMatrix ReadMatrixMarketFile(const std::filesystem::path& path);

// Symmetric coordinate real, lower triangle, 1-based, shortest round-trip
// number formatting.
void WriteMatrixMarket(std::ostream& out, const SymSparseMatrix& w);
std::string MatrixMarketString(const SymSparseMatrix& w);

}  // namespace stqmle::io
