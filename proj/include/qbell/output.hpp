#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qbell/quadrature.hpp"

namespace qbell {

// Shortest text that round-trips; 17 significant digits at most.
std::string format_number(double v);

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// "# key: value" lines, then the header, then one row per line.
void write_csv(std::ostream& os, const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);

// Binary grid layout (little-endian):
//   char[8]  "QBQGRID1"
//   u32      n_re, n_im, rule (0 gauss-legendre, 1 trapezoid), branch (0 '+', 1 '-')
//   f64      re_min, re_max, im_min, im_max, t
//   u64      FNV-1a hash of the canonical parameter string
//   f64      re nodes [n_re], im nodes [n_im], re weights [n_re], im weights [n_im]
//   f64      values [n_re][n_im], im index fastest
std::uint64_t fnv1a(const std::string& s);
std::string canonical_params(const SystemParams& p);

void write_grid_binary(const std::filesystem::path& path, const QGrid& grid);

struct GridFile {
  QGrid grid;
  std::uint64_t params_hash = 0;
};
GridFile read_grid_binary(const std::filesystem::path& path);

}  // namespace qbell
