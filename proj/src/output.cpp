#include "qbell/output.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "qbell/errors.hpp"

namespace qbell {

static_assert(std::endian::native == std::endian::little, "grid files are written little-endian");

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc()) throw NumericalError("cli::format_number", "formatting failed");
  return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& os, const Table& table) {
  for (const auto& [k, v] : table.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_csv(out, table);
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string canonical_params(const SystemParams& p) {
  return "delta=" + format_number(p.delta) + ";epsilon=" + format_number(p.epsilon) + ";omega=" +
         format_number(p.omega) + ";lambda=" + format_number(p.lambda) + ";alpha=" + format_number(p.alpha.real()) +
         "," + format_number(p.alpha.imag());
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("grid file truncated");
  return v;
}

constexpr char kMagic[8] = {'Q', 'B', 'Q', 'G', 'R', 'I', 'D', '1'};

}  // namespace

void write_grid_binary(const std::filesystem::path& path, const QGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write(kMagic, 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_re()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_im()));
  put<std::uint32_t>(out, g.rule == QuadratureRule::gauss_legendre ? 0u : 1u);
  put<std::uint32_t>(out, g.branch == Branch::plus ? 0u : 1u);
  for (double v : {g.box.re_min, g.box.re_max, g.box.im_min, g.box.im_max, g.t}) put<double>(out, v);
  put<std::uint64_t>(out, fnv1a(canonical_params(g.params)));
  for (const auto* vec : {&g.re.nodes, &g.im.nodes, &g.re.weights, &g.im.weights})
    for (double v : *vec) put<double>(out, v);
  for (int i = 0; i < g.n_re(); ++i)
    for (int j = 0; j < g.n_im(); ++j) put<double>(out, g.values(i, j));
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

GridFile read_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not a grid file: '" + path.string() + "'");
  GridFile f;
  QGrid& g = f.grid;
  const auto n_re = get<std::uint32_t>(in), n_im = get<std::uint32_t>(in);
  g.rule = get<std::uint32_t>(in) == 0 ? QuadratureRule::gauss_legendre : QuadratureRule::trapezoid;
  g.branch = get<std::uint32_t>(in) == 0 ? Branch::plus : Branch::minus;
  g.box.re_min = get<double>(in);
  g.box.re_max = get<double>(in);
  g.box.im_min = get<double>(in);
  g.box.im_max = get<double>(in);
  g.t = get<double>(in);
  f.params_hash = get<std::uint64_t>(in);
  auto read_vec = [&](std::vector<double>& v, std::uint32_t n) {
    v.resize(n);
    for (auto& x : v) x = get<double>(in);
  };
  read_vec(g.re.nodes, n_re);
  read_vec(g.im.nodes, n_im);
  read_vec(g.re.weights, n_re);
  read_vec(g.im.weights, n_im);
  g.values.resize(n_re, n_im);
  for (std::uint32_t i = 0; i < n_re; ++i)
    for (std::uint32_t j = 0; j < n_im; ++j) g.values(i, j) = get<double>(in);
  return f;
}

}  // namespace qbell
