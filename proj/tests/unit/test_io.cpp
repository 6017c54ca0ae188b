#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "stqmle/io/matrix_market.hpp"
#include "stqmle/io/panel_csv.hpp"
#include "stqmle/io/text.hpp"
#include "test_support.hpp"

using namespace stqmle;

namespace {

SymSparseMatrix ReadMm(const std::string& text) {
  std::istringstream in(text);
  return io::ReadMatrixMarket(in, "w.mtx");
}

PanelData ReadCsv(const std::string& text) {
  std::istringstream in(text);
  return io::ReadPanelCsv(in, "p.csv");
}

template <typename F>
ParseError ExpectParseError(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError";
  return ParseError("", 0, 0, "");
}

std::filesystem::path TempDir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("stqmle_io_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(MatrixMarket, SymmetricReal) {
  const SymSparseMatrix w = ReadMm(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 2\n"
      "2 1 0.5\n"
      "3 2 1.5\n");
  EXPECT_EQ(w.dim(), 3);
  EXPECT_EQ(w.at(0, 1), 0.5);
  EXPECT_EQ(w.at(1, 0), 0.5);
  EXPECT_EQ(w.at(2, 1), 1.5);
  EXPECT_EQ(w.nnz(), 4);
}

TEST(MatrixMarket, PatternAndInteger) {
  const SymSparseMatrix p = ReadMm("%%MatrixMarket matrix coordinate pattern symmetric\n2 2 1\n2 1\n");
  EXPECT_EQ(p.at(0, 1), 1.0);
  const SymSparseMatrix i = ReadMm("%%MatrixMarket matrix coordinate integer symmetric\n2 2 1\n2 1 3\n");
  EXPECT_EQ(i.at(1, 0), 3.0);
}

TEST(MatrixMarket, GeneralNeedsBothTriangles) {
  const SymSparseMatrix ok =
      ReadMm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n2 1 1\n");
  EXPECT_EQ(ok.nnz(), 2);
  const ParseError e = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real general\n3 3 3\n1 2 1\n2 1 1\n2 3 1\n");
  });
  EXPECT_EQ(e.line(), 5);
  EXPECT_NE(std::string(e.what()).find("(2, 3)"), std::string::npos);
  const ParseError v = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n2 1 2\n");
  });
  EXPECT_NE(std::string(v.what()).find("asymmetric"), std::string::npos);
}

TEST(MatrixMarket, MalformedInputReportsPosition) {
  const ParseError a = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 x 1\n");
  });
  EXPECT_EQ(a.line(), 3);
  EXPECT_EQ(a.column(), 3);
  EXPECT_EQ(a.code(), ErrorCode::kParse);
  const ParseError b = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n4 1 1\n");
  });
  EXPECT_EQ(b.line(), 3);
  const ParseError c = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix array real symmetric\n3 3\n");
  });
  EXPECT_EQ(c.line(), 1);
  const ParseError d = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n1 1 1\n");
  });
  EXPECT_NE(std::string(d.what()).find("zero diagonal"), std::string::npos);
  const ParseError dup = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 1\n2 1 1\n");
  });
  EXPECT_EQ(dup.line(), 4);
  const ParseError count = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 1\n");
  });
  EXPECT_EQ(count.code(), ErrorCode::kParse);
  const ParseError nan = ExpectParseError([] {
    ReadMm("%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1 nan\n");
  });
  EXPECT_EQ(nan.column(), 5);
}

TEST(MatrixMarket, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Triplet> t = testing_support::RookGrid(5).UpperTriplets();
  for (Triplet& e : t) e.value = u(rng);
  const SymSparseMatrix w = SymSparseMatrix::FromTriangle(25, t);
  const SymSparseMatrix r = ReadMm(io::MatrixMarketString(w));
  EXPECT_EQ(Checksum(r), Checksum(w));
  for (Index i = 0; i < 25; ++i) {
    for (Index j = 0; j < 25; ++j) EXPECT_EQ(r.at(i, j), w.at(i, j));
  }
}

TEST(MatrixMarket, MissingFileIsIoError) {
  try {
    io::ReadMatrixMarketFile("/nonexistent/w.mtx");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(PanelCsv, ReadsAnyRowOrder) {
  const PanelData d = ReadCsv(
      "cell_id,time,y,x1\n"
      "1,1,4,1\n"
      "0,0,1,1\n"
      "1,0,2,1\n"
      "0,1,3,1\n");
  EXPECT_EQ(d.N(), 2);
  EXPECT_EQ(d.T(), 2);
  EXPECT_EQ(d.k(), 1);
  EXPECT_EQ(d.y(0)[0], 1.0);
  EXPECT_EQ(d.y(0)[1], 2.0);
  EXPECT_EQ(d.y(1)[0], 3.0);
  EXPECT_EQ(d.y(1)[1], 4.0);
}

TEST(PanelCsv, MissingPairIsNamed) {
  try {
    ReadCsv("cell_id,time,y,x1\n0,0,1,1\n1,0,2,1\n0,1,3,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("cell_id=1, time=1"), std::string::npos);
  }
}

TEST(PanelCsv, Errors) {
  const ParseError dup = ExpectParseError([] {
    ReadCsv("cell_id,time,y,x1\n0,0,1,1\n0,0,2,1\n");
  });
  EXPECT_EQ(dup.line(), 3);
  const ParseError nan = ExpectParseError([] {
    ReadCsv("cell_id,time,y,x1\n0,0,nan,1\n");
  });
  EXPECT_EQ(nan.line(), 2);
  EXPECT_EQ(nan.column(), 5);
  const ParseError word = ExpectParseError([] {
    ReadCsv("cell_id,time,y,x1\n0,0,1,abc\n");
  });
  EXPECT_EQ(word.column(), 7);
  const ParseError cols = ExpectParseError([] {
    ReadCsv("cell_id,time,y,x1\n0,0,1\n");
  });
  EXPECT_EQ(cols.line(), 2);
  const ParseError header = ExpectParseError([] { ReadCsv("id,t,y\n"); });
  EXPECT_EQ(header.line(), 1);
  const ParseError neg = ExpectParseError([] {
    ReadCsv("cell_id,time,y,x1\n-1,0,1,1\n");
  });
  EXPECT_EQ(neg.column(), 1);
}

TEST(PanelCsv, RoundTripIsExact) {
  const PanelData d = testing_support::RandomPanel(13, 4, 3, 7);
  const std::string text = io::PanelCsvString(d);
  EXPECT_EQ(ReadCsv(text), d);
  EXPECT_EQ(io::PanelCsvString(ReadCsv(text)), text);
}

TEST(Text, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 40) - 20);
    double back = 0.0;
    ASSERT_TRUE(io::ParseDouble(io::FormatDouble(v), &back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(io::FormatDouble(0.5), "0.5");
  EXPECT_EQ(io::FormatDouble(1.0), "1");
}

TEST(Text, ParseNumbers) {
  double d = 0.0;
  long long n = 0;
  EXPECT_TRUE(io::ParseDouble("1e-3", &d));
  EXPECT_EQ(d, 1e-3);
  EXPECT_FALSE(io::ParseDouble("1.0x", &d));
  EXPECT_FALSE(io::ParseDouble("", &d));
  EXPECT_TRUE(io::ParseInt("-42", &n));
  EXPECT_EQ(n, -42);
  EXPECT_FALSE(io::ParseInt("4.2", &n));
}

TEST(Text, ConfigParsing) {
  std::istringstream ok("# settings\nschema_version = 1\n\nseed=7\n  reps = 20  \n");
  const auto kv = io::ParseConfig(ok, "c.cfg");
  EXPECT_EQ(kv.at("seed"), "7");
  EXPECT_EQ(kv.at("reps"), "20");
  std::istringstream dup("schema_version = 1\nseed = 1\nseed = 2\n");
  const ParseError e = ExpectParseError([&] { io::ParseConfig(dup, "c.cfg"); });
  EXPECT_EQ(e.line(), 3);
  std::istringstream missing("seed = 1\n");
  EXPECT_THROW(io::ParseConfig(missing, "c.cfg"), ParseError);
  std::istringstream wrong("schema_version = 2\n");
  EXPECT_THROW(io::ParseConfig(wrong, "c.cfg"), ParseError);
  std::istringstream junk("schema_version = 1\nnot a pair\n");
  EXPECT_EQ(ExpectParseError([&] { io::ParseConfig(junk, "c.cfg"); }).line(), 2);
}

TEST(Text, AtomicWriteReplaces) {
  const auto dir = TempDir("atomic");
  const auto path = dir / "out.txt";
  io::AtomicWrite(path, "first");
  io::AtomicWrite(path, "second");
  EXPECT_EQ(io::ReadFile(path), "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  EXPECT_THROW(io::AtomicWrite(dir / "missing" / "x.txt", "x"), Error);
}

TEST(Text, Fnv1aKnownValues) {
  EXPECT_EQ(io::Fnv1a(""), "cbf29ce484222325");
  EXPECT_EQ(io::Fnv1a("a"), "af63dc4c8601ec8c");
}
