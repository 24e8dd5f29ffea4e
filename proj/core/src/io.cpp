#include "msrimg/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "msrimg/errors.hpp"

namespace msrimg {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw IoError("msr file: bad number '" + token + "'");
  }
  if (used != token.size()) throw IoError("msr file: bad number '" + token + "'");
  return v;
}

std::string expect_key(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("msr file: missing '" + key + "' line");
  std::istringstream ls(line);
  std::string got;
  ls >> got;
  if (got != key) throw IoError("msr file: expected '" + key + "', got '" + got + "'");
  std::string rest;
  std::getline(ls >> std::ws, rest);
  return rest;
}

}  // namespace

void write_msr(std::ostream& os, const MsrMatrix& k) {
  const std::size_t n = k.size();
  os << "msrimg-msr 1\n";
  os << "N " << n << '\n';
  os << "omega " << format_real(k.omega) << '\n';
  os << "provenance " << (k.clean() ? "clean" : "noisy") << '\n';
  for (const NoiseRecord& r : k.noise)
    os << "noise " << format_real(r.snr_db) << ' ' << r.seed << ' ' << r.stream << '\n';
  os << "data\n";
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) {
      if (l) os << ' ';
      os << format_real(k.entries(j, l).real()) << ' ' << format_real(k.entries(j, l).imag());
    }
    os << '\n';
  }
}

MsrMatrix read_msr(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "msrimg-msr 1")
    throw IoError("msr file: missing or unsupported version header");
  const std::string n_text = expect_key(is, "N");
  const double n_real = parse_real(n_text);
  if (n_real < 2 || n_real != static_cast<int>(n_real)) throw IoError("msr file: bad N");
  const int n = static_cast<int>(n_real);
  const double omega = parse_real(expect_key(is, "omega"));
  const std::string prov = expect_key(is, "provenance");
  if (prov != "clean" && prov != "noisy") throw IoError("msr file: bad provenance '" + prov + "'");

  std::vector<NoiseRecord> noise;
  while (std::getline(is, line) && line != "data") {
    std::istringstream ls(line);
    std::string key, snr;
    std::uint64_t seed = 0, stream = 0;
    if (!(ls >> key >> snr >> seed >> stream) || key != "noise")
      throw IoError("msr file: bad header line '" + line + "'");
    noise.push_back({parse_real(snr), seed, stream});
  }
  if (line != "data") throw IoError("msr file: missing data section");
  if ((prov == "clean") != noise.empty())
    throw IoError("msr file: provenance does not match noise records");

  MsrMatrix k{make_directions(n), omega, ComplexMatrix(n, n), std::move(noise)};
  for (int j = 0; j < n; ++j) {
    if (!std::getline(is, line)) throw IoError("msr file: truncated data");
    std::istringstream ls(line);
    for (int l = 0; l < n; ++l) {
      std::string re, im;
      if (!(ls >> re >> im)) throw IoError("msr file: short row " + std::to_string(j + 1));
      k.entries(j, l) = complex(parse_real(re), parse_real(im));
    }
    std::string extra;
    if (ls >> extra) throw IoError("msr file: long row " + std::to_string(j + 1));
  }
  return k;
}

void write_msr_file(const std::filesystem::path& path, const MsrMatrix& k) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_msr(os, k);
  if (!os) throw IoError("write failed for " + path.string());
}

MsrMatrix read_msr_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return read_msr(is);
}

}  // namespace msrimg
