#include "tsera/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace tsera {

namespace fs = std::filesystem;

namespace {

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(std::string_view token, double& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

Tensor parse_tensor(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  if (!next_line() || trim(line) != "tensor v1") {
    throw ParseError(where(source, lineno) + "expected header 'tensor v1'");
  }
  if (!next_line() || !trim(line).starts_with("shape:")) {
    throw ParseError(where(source, lineno) + "expected 'shape: m1 ... mK'");
  }
  Tensor::Shape shape;
  {
    std::istringstream ss(trim(line).substr(6));
    std::string tok;
    while (ss >> tok) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 1) {
        throw ParseError(where(source, lineno) + "bad dimension '" + tok + "'");
      }
      shape.push_back(static_cast<Index>(v));
    }
    if (shape.empty()) throw ParseError(where(source, lineno) + "empty shape");
  }
  const Index expected = Tensor::product(shape);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(expected));
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      if (!parse_number(tok, v)) throw ParseError(where(source, lineno) + "bad value '" + tok + "'");
      if (!std::isfinite(v)) throw ParseError(where(source, lineno) + "non-finite value '" + tok + "'");
      if (static_cast<Index>(values.size()) == expected) {
        throw ParseError(where(source, lineno) + "more than the " + std::to_string(expected) +
                         " values declared by the shape");
      }
      values.push_back(v);
    }
  }
  if (static_cast<Index>(values.size()) != expected) {
    throw ParseError(where(source, lineno) + "found " + std::to_string(values.size()) +
                     " values, shape declares " + std::to_string(expected));
  }
  return Tensor(std::move(shape), std::move(values));
}

std::string render_tensor(const Tensor& t) {
  std::string out = "tensor v1\nshape:";
  for (Index m : t.shape()) out += " " + std::to_string(m);
  out += "\n";
  const Index row = t.shape().back();
  auto data = t.data();
  for (Index e = 0; e < t.size(); ++e) {
    out += format_double(data[e]);
    out += (e + 1) % row == 0 ? '\n' : ' ';
  }
  return out;
}

Tensor read_tensor(const fs::path& path) {
  auto in = open_input(path);
  return parse_tensor(in, path.string());
}

void write_tensor(const Tensor& t, const fs::path& path) { atomic_write(path, render_tensor(t)); }

Matrix read_matrix(const fs::path& path) {
  const Tensor t = read_tensor(path);
  if (t.order() != 2 || t.dim(0) != t.dim(1)) throw ParseError(path.string() + ": expected a square order-2 tensor");
  return matricize(t, 0);
}

void write_matrix(const Matrix& M, const fs::path& path) {
  write_tensor(fold<double>(M, 0, {M.rows(), M.cols()}), path);
}

std::vector<fs::path> read_manifest(const fs::path& path) {
  auto in = open_input(path);
  std::vector<fs::path> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    const std::string entry = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (entry.empty()) continue;
    fs::path p(entry);
    if (p.is_relative()) p = path.parent_path() / p;
    out.push_back(p);
  }
  return out;
}

std::vector<Tensor> read_group(const fs::path& manifest) {
  std::vector<Tensor> group;
  for (const auto& p : read_manifest(manifest)) group.push_back(read_tensor(p));
  if (group.size() < 2) {
    throw ParseError(manifest.string() + ": a group needs at least 2 observations, found " +
                     std::to_string(group.size()));
  }
  for (const auto& t : group) {
    if (t.shape() != group.front().shape()) throw ParseError(manifest.string() + ": tensors differ in shape");
  }
  return group;
}

void atomic_write(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

std::string format_double(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    double back = 0.0;
    if (parse_number(buf, back) && back == v) break;
  }
  return buf;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  return std::nullopt;
}

Vector CsvTable::numeric(std::string_view name) const {
  const auto c = column(name);
  if (!c) throw ParseError("missing CSV column '" + std::string(name) + "'");
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double v = 0.0;
    if (*c >= rows[r].size() || !parse_number(rows[r][*c], v) || !std::isfinite(v)) {
      throw ParseError("CSV row " + std::to_string(r + 1) + ": bad value in column '" +
                       std::string(name) + "'");
    }
    out(static_cast<Index>(r)) = v;
  }
  return out;
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (table.header.empty()) {
      table.header = split(t);
      continue;
    }
    auto cells = split(t);
    if (cells.size() != table.header.size()) {
      throw ParseError(where(source, lineno) + "expected " + std::to_string(table.header.size()) +
                       " cells, found " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw ParseError(source + ": empty CSV");
  return table;
}

CsvTable read_csv(const fs::path& path) {
  auto in = open_input(path);
  return parse_csv(in, path.string());
}

}  // namespace tsera
