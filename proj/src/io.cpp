#include "conslaw/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "conslaw/errors.hpp"

namespace conslaw {

namespace {

static_assert(std::endian::native == std::endian::little, "binary frames assume a little-endian host");

constexpr char kMagic[8] = {'C', 'L', 'F', 'R', 'A', 'M', 'E', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("truncated frame data");
  return v;
}

std::string to_hex(const unsigned char* d, unsigned int n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < n; ++i) {
    s.push_back(digits[d[i] >> 4]);
    s.push_back(digits[d[i] & 15]);
  }
  return s;
}

struct Digest {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};
  Digest() {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  }
  void update(const void* p, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), p, n) != 1) throw Error("sha256 update failed");
  }
  std::string finish() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("sha256 final failed");
    return to_hex(md, len);
  }
};

}  // namespace

void write_frame(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid();
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.rank()));
  put<std::uint32_t>(out, 0);
  for (auto n : g.shape) put<std::uint64_t>(out, n);
  for (double o : g.origin) put<double>(out, o);
  for (double h : g.spacing) put<double>(out, h);
  put<double>(out, field.time());
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
  if (!out) throw Error("failed to write frame");
}

ScalarField read_frame(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw InputError("not a CLFRAME1 frame");
  const auto rank = get<std::uint32_t>(in);
  get<std::uint32_t>(in);
  if (rank < 1 || rank > 3) throw InputError("frame rank must be 1..3");
  Grid g;
  for (std::uint32_t a = 0; a < rank; ++a) g.shape.push_back(static_cast<std::size_t>(get<std::uint64_t>(in)));
  for (std::uint32_t a = 0; a < rank; ++a) g.origin.push_back(get<double>(in));
  for (std::uint32_t a = 0; a < rank; ++a) g.spacing.push_back(get<double>(in));
  g.validate();
  const double t = get<double>(in);
  std::vector<double> v(g.size());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw InputError("truncated frame values");
  return ScalarField(g, std::move(v), t);
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string());
  for (const auto& f : traj.frames) write_frame(out, f);
}

Trajectory read_trajectory(const std::filesystem::path& path, const std::string& flux_name,
                           const SolverConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  Trajectory t;
  t.flux_name = flux_name;
  t.config = config;
  while (in.peek() != std::char_traits<char>::eof()) t.frames.push_back(read_frame(in));
  if (t.frames.empty()) throw InputError("trajectory file holds no frames");
  return t;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

void write_frame_csv(const std::filesystem::path& path, const ScalarField& field) {
  const Grid& g = field.grid();
  std::vector<std::string> header;
  for (std::size_t a = 0; a < g.rank(); ++a) header.push_back("x" + std::to_string(a));
  header.push_back("u");
  std::vector<std::vector<double>> rows;
  rows.reserve(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) {
    auto row = g.center_of(k);
    row.push_back(field[k]);
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

ScalarField read_frame_csv(const std::filesystem::path& path, double time) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + " is empty");
  const auto cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (cols < 2 || cols > 4) throw InputError(path.string() + ": expected 2 to 4 columns");
  const std::size_t rank = cols - 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(path.string() + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != cols) throw InputError(path.string() + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + " has no rows");
  Grid g;
  // Row-major: the last axis varies fastest, so its extent is the run length
  // of the first coordinate of axis 0, and so on.
  std::size_t inner = rows.size();
  for (std::size_t a = 0; a < rank; ++a) {
    std::size_t n = 1;
    const std::size_t step = inner;
    std::size_t run = 1;
    while (run < step && rows[run][a] == rows[0][a]) ++run;
    n = step / run;
    if (n * run != step) throw InputError(path.string() + ": rows do not form a grid");
    g.shape.push_back(n);
    const double h = n > 1 ? rows[run][a] - rows[0][a] : 1.0;
    if (!(h > 0.0)) throw InputError(path.string() + ": coordinates must increase");
    g.spacing.push_back(h);
    g.origin.push_back(rows[0][a] - 0.5 * h);
    inner = run;
  }
  g.validate();
  if (g.size() != rows.size()) throw InputError(path.string() + ": rows do not form a grid");
  std::vector<double> vals(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto c = g.center_of(k);
    for (std::size_t a = 0; a < rank; ++a)
      if (std::abs(c[a] - rows[k][a]) > 1e-6 * g.spacing[a])
        throw InputError(path.string() + ": non-uniform coordinates at row " + std::to_string(k + 2));
    vals[k] = rows[k][rank];
  }
  return ScalarField(g, std::move(vals), time);
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  Digest d;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return d.finish();
}

std::string sha256_hex(const std::string& data) {
  Digest d;
  d.update(data.data(), data.size());
  return d.finish();
}

}  // namespace conslaw
