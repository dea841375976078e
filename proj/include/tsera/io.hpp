#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsera/tensor.hpp"

namespace tsera {

// Tensor text format, version 1:
//
//   tensor v1
//   shape: m1 m2 ... mK
//   <m1*...*mK finite decimal values, last index fastest, any whitespace>

Tensor parse_tensor(std::istream& in, const std::string& source = "<stream>");
std::string render_tensor(const Tensor& t);

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const Tensor& t, const std::filesystem::path& path);

/// Square matrix stored as an order-2 tensor file.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const Matrix& M, const std::filesystem::path& path);

/// One tensor path per non-empty line ('#' starts a comment); relative paths
/// resolve against the manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path);

/// Reads every tensor of a manifest; requires >= 2 observations of one shape.
std::vector<Tensor> read_group(const std::filesystem::path& manifest);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed run never leaves a partial file at `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal text that reads back to the same double (17 significant
/// digits at most).
std::string format_double(double v);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view text);

/// Minimal CSV table: header names plus rows of cells. Lines starting with
/// '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  /// Numeric column; throws ParseError on a missing or non-numeric cell.
  Vector numeric(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace tsera
