#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "tsera/io.hpp"

using namespace tsera;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tsera_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Tensor parse(const std::string& text) {
  std::istringstream in(text);
  return parse_tensor(in, "t");
}

}  // namespace

TEST(TensorFile, RoundTripIsBitExact) {
  Rng rng(1);
  const auto dir = scratch("roundtrip");
  Tensor t = tsera::testing::random_tensor({3, 2, 4}, rng);
  t.data()[0] = 1e-300;
  t.data()[1] = -0.1;
  t.data()[2] = 1.0 / 3.0;
  write_tensor(t, dir / "a.tensor");
  EXPECT_EQ(read_tensor(dir / "a.tensor"), t);
}

TEST(TensorFile, Errors) {
  try {
    parse("tensor v1\nshape: 2 2\n1 2 3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("found 3 values, shape declares 4"), std::string::npos);
  }
  EXPECT_THROW(parse("tensor v1\nshape: 2\n1 NaN\n"), ParseError);
  EXPECT_THROW(parse("tensor v1\nshape: 2\n1 inf\n"), ParseError);
  EXPECT_THROW(parse("tensor v2\nshape: 2\n1 2\n"), ParseError);
  EXPECT_THROW(parse("tensor v1\nshape: 0\n"), ParseError);
  EXPECT_THROW(parse("tensor v1\nshape: 2\n1 2 3\n"), ParseError);
  try {
    parse("tensor v1\nshape: 3\n1\n2x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("t:4:"), std::string::npos);
  }
  EXPECT_THROW(read_tensor("/nonexistent/x.tensor"), IoError);
}

TEST(TensorFile, Matrix) {
  const auto dir = scratch("matrix");
  Matrix M(2, 2);
  M << 1, 0.5, 0.5, 2;
  write_matrix(M, dir / "m.tensor");
  EXPECT_EQ(read_matrix(dir / "m.tensor"), M);
}

TEST(Manifest, RelativePathsAndGroupChecks) {
  const auto dir = scratch("manifest");
  Rng rng(2);
  fs::create_directories(dir / "obs");
  write_tensor(tsera::testing::random_tensor({2, 3}, rng), dir / "obs" / "a.tensor");
  write_tensor(tsera::testing::random_tensor({2, 3}, rng), dir / "obs" / "b.tensor");
  write_tensor(tsera::testing::random_tensor({3, 2}, rng), dir / "obs" / "c.tensor");
  atomic_write(dir / "ok.manifest", "# group\nobs/a.tensor\n\nobs/b.tensor  # second\n");
  EXPECT_EQ(read_group(dir / "ok.manifest").size(), 2u);
  atomic_write(dir / "one.manifest", "obs/a.tensor\n");
  EXPECT_THROW(read_group(dir / "one.manifest"), ParseError);
  atomic_write(dir / "mixed.manifest", "obs/a.tensor\nobs/c.tensor\n");
  EXPECT_THROW(read_group(dir / "mixed.manifest"), ParseError);
}

TEST(AtomicWrite, LeavesNoPartialFile) {
  const auto dir = scratch("atomic");
  atomic_write(dir / "x.txt", "hello");
  EXPECT_THROW(atomic_write(dir / "missing" / "x.txt", "data"), IoError);
  EXPECT_FALSE(fs::exists(dir / "missing"));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-17, 123456789.123456789, -4.9e-324}) {
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Csv, ParseAndColumns) {
  std::istringstream in("# note\nT,U\n1.5, 2\n-0.5,3\n");
  const auto t = parse_csv(in, "c");
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.numeric("T"), (Vector(2) << 1.5, -0.5).finished());
  EXPECT_FALSE(t.column("p").has_value());
  EXPECT_THROW(t.numeric("p"), ParseError);
  std::istringstream bad("T,U\n1\n");
  EXPECT_THROW(parse_csv(bad, "c"), ParseError);
}
