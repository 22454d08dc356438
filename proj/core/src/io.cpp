#include "rcurc/io.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

#include <json.hpp>

#include "rcurc/errors.hpp"

namespace rcurc {

namespace {

constexpr char kMagic[8] = {'R', 'C', 'U', 'R', 'C', 'M', 'A', 'T'};
constexpr std::size_t kPayloadOffset = 8 + 4 + 8 + 8;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int q = 0; q < 4; ++q) b[q] = static_cast<unsigned char>(v >> (8 * q));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int q = 0; q < 8; ++q) b[q] = static_cast<unsigned char>(v >> (8 * q));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, 8);
  put_u64(os, u);
}

std::uint64_t get_uint(std::istream& is, int bytes,
                       const std::filesystem::path& path, std::size_t offset) {
  unsigned char b[8] = {};
  is.read(reinterpret_cast<char*>(b), bytes);
  if (is.gcount() != bytes)
    throw FormatError("read_matrix: " + path.string() +
                      ": truncated header at byte offset " +
                      std::to_string(offset));
  std::uint64_t v = 0;
  for (int q = bytes - 1; q >= 0; --q) v = (v << 8) | b[q];
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t u = 0;
  for (int q = 7; q >= 0; --q) u = (u << 8) | b[q];
  double d;
  std::memcpy(&d, &u, 8);
  return d;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw ArgumentError("write_matrix: refusing to write an empty matrix");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("write_matrix: cannot open " + path.string() +
                  " for writing");
  os.write(kMagic, 8);
  put_u32(os, 1);
  put_u64(os, m.rows());
  put_u64(os, m.cols());
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(m.raw()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    for (const double v : m.data()) put_f64(os, v);
  }
  os.flush();
  if (!os) throw IoError("write_matrix: I/O failure writing " + path.string());
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_matrix: cannot open " + path.string());

  char magic[8];
  is.read(magic, 8);
  if (is.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0)
    throw FormatError("read_matrix: " + path.string() +
                      ": bad magic at byte offset 0");
  const auto version = get_uint(is, 4, path, 8);
  if (version != 1)
    throw FormatError("read_matrix: " + path.string() +
                      ": unsupported version " + std::to_string(version) +
                      " at byte offset 8");
  const std::uint64_t rows = get_uint(is, 8, path, 12);
  const std::uint64_t cols = get_uint(is, 8, path, 20);
  if (rows == 0 || cols == 0)
    throw FormatError("read_matrix: " + path.string() +
                      ": zero dimension in header at byte offset 12");
  if (rows > std::numeric_limits<std::size_t>::max() / sizeof(double) / cols)
    throw FormatError("read_matrix: " + path.string() +
                      ": implausible shape in header at byte offset 12");

  const std::size_t count = static_cast<std::size_t>(rows * cols);
  alloc::TrackedVec<double> buf(count);
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
      throw FormatError(
          "read_matrix: " + path.string() + ": truncated payload: expected " +
          std::to_string(count * sizeof(double)) + " bytes, got " +
          std::to_string(is.gcount()) + " (payload starts at byte offset " +
          std::to_string(kPayloadOffset) + ")");
  } else {
    for (std::size_t q = 0; q < count; ++q) {
      buf[q] = get_f64(is);
      if (!is)
        throw FormatError("read_matrix: " + path.string() +
                          ": truncated payload: expected " +
                          std::to_string(count * sizeof(double)) +
                          " bytes (payload starts at byte offset " +
                          std::to_string(kPayloadOffset) + ")");
    }
  }
  is.peek();
  if (!is.eof())
    throw FormatError("read_matrix: " + path.string() +
                      ": trailing bytes after the payload");
  for (std::size_t q = 0; q < count; ++q)
    if (!std::isfinite(buf[q]))
      throw FormatError("read_matrix: " + path.string() +
                        ": non-finite value at payload index " +
                        std::to_string(q));
  return detail::make_matrix_unchecked(static_cast<std::size_t>(rows),
                                       static_cast<std::size_t>(cols),
                                       std::move(buf));
}

namespace {

/// Read one unsigned decimal header token, skipping whitespace and
/// `#`-to-end-of-line comments, and consume exactly one trailing whitespace
/// byte (after the maxval token that byte is the raster delimiter).
std::size_t pgm_token(std::istream& is, const std::filesystem::path& path) {
  int c = is.get();
  while (c != EOF &&
         (std::isspace(static_cast<unsigned char>(c)) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = is.get();
    c = is.get();
  }
  if (c == EOF || !std::isdigit(static_cast<unsigned char>(c)))
    throw FormatError("frames_to_matrix: " + path.string() +
                      ": malformed PGM header");
  std::size_t v = 0;
  while (c != EOF && std::isdigit(static_cast<unsigned char>(c))) {
    v = v * 10 + static_cast<std::size_t>(c - '0');
    if (v > 1000000000)
      throw FormatError("frames_to_matrix: " + path.string() +
                        ": implausible PGM header value");
    c = is.get();
  }
  if (c == EOF || !std::isspace(static_cast<unsigned char>(c)))
    throw FormatError("frames_to_matrix: " + path.string() +
                      ": malformed PGM header");
  return v;
}

}  // namespace

DenseMatrix frames_to_matrix(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty())
    throw ArgumentError("frames_to_matrix: need at least one frame");
  std::size_t h = 0, w = 0;
  DenseMatrix out;
  alloc::TrackedVec<unsigned char> raster;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    const std::filesystem::path& path = paths[f];
    std::ifstream is(path, std::ios::binary);
    if (!is)
      throw IoError("frames_to_matrix: cannot open " + path.string());
    char m0 = 0, m1 = 0;
    is.get(m0);
    is.get(m1);
    if (!is || m0 != 'P' || m1 != '5')
      throw FormatError("frames_to_matrix: " + path.string() +
                        ": not a binary PGM (P5) file");
    const std::size_t fw = pgm_token(is, path);
    const std::size_t fh = pgm_token(is, path);
    const std::size_t maxval = pgm_token(is, path);
    if (fw == 0 || fh == 0)
      throw FormatError("frames_to_matrix: " + path.string() +
                        ": zero frame dimension");
    if (maxval == 0 || maxval > 255)
      throw FormatError("frames_to_matrix: " + path.string() +
                        ": unsupported PGM maxval " + std::to_string(maxval) +
                        " (8-bit only)");
    if (f == 0) {
      h = fh;
      w = fw;
      out = DenseMatrix(h * w, paths.size());
      raster.resize(h * w);
    } else if (fh != h || fw != w) {
      throw FormatError("frames_to_matrix: " + path.string() + ": frame is " +
                        std::to_string(fw) + "x" + std::to_string(fh) +
                        ", expected " + std::to_string(w) + "x" +
                        std::to_string(h));
    }
    is.read(reinterpret_cast<char*>(raster.data()),
            static_cast<std::streamsize>(h * w));
    if (static_cast<std::size_t>(is.gcount()) != h * w)
      throw FormatError("frames_to_matrix: " + path.string() +
                        ": truncated raster: expected " +
                        std::to_string(h * w) + " bytes, got " +
                        std::to_string(is.gcount()));
    // Column-major vectorization: pixel (r, c) lands at output row c*h + r.
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c)
        out(c * h + r, f) = static_cast<double>(raster[r * w + c]);
  }
  return out;
}

void write_observation(const std::filesystem::path& path,
                       const CcsObservation& obs) {
  nlohmann::json j;
  j["format"] = "rcurc-observation";
  j["version"] = 1;
  j["n1"] = obs.n1;
  j["n2"] = obs.n2;
  j["row_idx"] = std::vector<index_t>(obs.row_idx.values.begin(),
                                      obs.row_idx.values.end());
  j["col_idx"] = std::vector<index_t>(obs.col_idx.values.begin(),
                                      obs.col_idx.values.end());
  auto mask_entries = [](const Mask& m) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [i, jj] : m.entries)
      a.push_back(nlohmann::json::array({i, jj}));
    return a;
  };
  j["omega_r"] = mask_entries(obs.omega_r);
  j["omega_c"] = mask_entries(obs.omega_c);
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t q = 0; q < obs.union_size(); ++q)
    vals.push_back(nlohmann::json::array(
        {obs.union_i[q], obs.union_j[q], obs.union_val[q]}));
  j["values"] = std::move(vals);

  std::ofstream os(path, std::ios::trunc);
  if (!os)
    throw IoError("write_observation: cannot open " + path.string() +
                  " for writing");
  os << j.dump() << '\n';
  os.flush();
  if (!os)
    throw IoError("write_observation: I/O failure writing " + path.string());
}

CcsObservation read_observation(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("read_observation: cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("read_observation: " + path.string() + ": " + e.what());
  }

  try {
    if (!j.is_object() || j.at("format") != "rcurc-observation")
      throw FormatError("read_observation: " + path.string() +
                        ": not an observation file");
    if (j.at("version") != 1)
      throw FormatError("read_observation: " + path.string() +
                        ": unsupported version");
    const auto n1 = j.at("n1").get<std::uint64_t>();
    const auto n2 = j.at("n2").get<std::uint64_t>();

    auto index_list = [&](const char* key) {
      alloc::TrackedVec<index_t> out;
      for (const auto& e : j.at(key)) out.push_back(e.get<index_t>());
      return out;
    };
    auto mask_list = [&](const char* key) {
      alloc::TrackedVec<std::pair<index_t, index_t>> out;
      for (const auto& e : j.at(key)) {
        if (!e.is_array() || e.size() != 2)
          throw FormatError("read_observation: " + path.string() + ": " + key +
                            " entries must be [row, col] pairs");
        out.emplace_back(e[0].get<index_t>(), e[1].get<index_t>());
      }
      return out;
    };

    IndexSet row_idx(n1, index_list("row_idx"));
    IndexSet col_idx(n2, index_list("col_idx"));
    Mask omega_r(n1, n2, mask_list("omega_r"));
    Mask omega_c(n1, n2, mask_list("omega_c"));

    alloc::TrackedVec<index_t> ui, uj;
    alloc::TrackedVec<double> uv;
    for (const auto& e : j.at("values")) {
      if (!e.is_array() || e.size() != 3)
        throw FormatError("read_observation: " + path.string() +
                          ": values entries must be [row, col, value]");
      ui.push_back(e[0].get<index_t>());
      uj.push_back(e[1].get<index_t>());
      uv.push_back(e[2].get<double>());
    }

    return CcsObservation::create(n1, n2, std::move(row_idx),
                                  std::move(col_idx), std::move(omega_r),
                                  std::move(omega_c), std::move(ui),
                                  std::move(uj), std::move(uv));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("read_observation: " + path.string() + ": " + e.what());
  }
}

void write_trace(const std::filesystem::path& path, const SolveReport& report) {
  std::ofstream os(path, std::ios::trunc);
  if (!os)
    throw IoError("write_trace: cannot open " + path.string() +
                  " for writing");
  os << "iter,e_k,zeta_k,wall_ms\n";
  char line[160];
  for (const TracePoint& tp : report.trace) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", tp.iter,
                  tp.e_k, tp.zeta_k, tp.wall_ms);
    os << line;
  }
  os << "# termination=" << to_string(report.termination) << '\n';
  os.flush();
  if (!os) throw IoError("write_trace: I/O failure writing " + path.string());
}

}  // namespace rcurc
