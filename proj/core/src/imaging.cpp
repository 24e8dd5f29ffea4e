#include "msrimg/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <string>

#include "msrimg/errors.hpp"
#include "msrimg/io.hpp"
#include "parallel.hpp"

namespace msrimg {

void SteeringConfig::validate() const {
  if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0)
    throw DomainError("SteeringConfig: c must be nonzero");
  for (double v : c)
    if (!std::isfinite(v)) throw DomainError("SteeringConfig: c must be finite");
}

ImageGrid::ImageGrid(double x_min, double x_max, double y_min, double y_max, int nx, int ny)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) throw DomainError("ImageGrid: resolution must be >= 2 per axis");
  if (!(x_min < x_max) || !(y_min < y_max)) throw DomainError("ImageGrid: empty range");
}

ImageGrid ImageGrid::square(int resolution, double half_width) {
  return ImageGrid(-half_width, half_width, -half_width, half_width, resolution, resolution);
}

double ImageGrid::x(int ix) const {
  return ix + 1 == nx_ ? x_max_ : x_min_ + (x_max_ - x_min_) * ix / (nx_ - 1);
}

double ImageGrid::y(int iy) const {
  return iy + 1 == ny_ ? y_max_ : y_min_ + (y_max_ - y_min_) * iy / (ny_ - 1);
}

Point2 ImageGrid::point(std::size_t index) const {
  if (index >= size()) throw DomainError("ImageGrid: point index out of range");
  const int ix = static_cast<int>(index % static_cast<std::size_t>(nx_));
  const int iy = static_cast<int>(index / static_cast<std::size_t>(nx_));
  return {x(ix), y(iy)};
}

double ImageGrid::cell_diagonal() const {
  return std::hypot((x_max_ - x_min_) / (nx_ - 1), (y_max_ - y_min_) / (ny_ - 1));
}

std::string Functional::tag() const {
  switch (kind) {
    case FunctionalKind::single: return "SF";
    case FunctionalKind::multi: return "MF";
    case FunctionalKind::weighted: return "WMF(" + std::to_string(power) + ")";
    case FunctionalKind::log: return "LOG";
  }
  return "?";
}

std::string Functional::file_tag() const {
  if (kind == FunctionalKind::weighted) return "WMF" + std::to_string(power);
  return tag();
}

Functional Functional::parse(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (t == "SF") return sf();
  if (t == "MF") return mf();
  if (t == "LOG") return log();
  if (t.rfind("WMF", 0) == 0) {
    std::string digits = t.substr(3);
    if (digits.size() >= 2 && digits.front() == '(' && digits.back() == ')')
      digits = digits.substr(1, digits.size() - 2);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(),
                                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return wmf(std::stoi(digits));
  }
  throw ConfigurationError("unknown functional '" + text + "'");
}

double ImageMap::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::vector<double> ImageMap::normalized() const {
  std::vector<double> out(values.size(), 0.0);
  const double top = max_value();
  if (top > 0.0)
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / top;
  return out;
}

namespace {

std::vector<double> steering_amplitudes(const DirectionSet& dirs, const SteeringConfig& cfg) {
  cfg.validate();
  std::vector<double> amp(dirs.size());
  double total = 0.0;
  for (std::size_t l = 0; l < dirs.size(); ++l) {
    const Vec2 t = dirs.incident(l);
    amp[l] = cfg.c[0] + cfg.c[1] * t.x + cfg.c[2] * t.y;
    total += amp[l] * amp[l];
  }
  if (total == 0.0)
    throw DegenerateSteeringError("steering weights vanish for every direction");
  if (cfg.normalize) {
    const double inv = 1.0 / std::sqrt(total);
    for (double& a : amp) a *= inv;
  }
  return amp;
}

}  // namespace

std::vector<complex> test_vector(Point2 z, double omega, const DirectionSet& dirs,
                                 const SteeringConfig& cfg) {
  const auto amp = steering_amplitudes(dirs, cfg);
  std::vector<complex> w(dirs.size());
  for (std::size_t l = 0; l < dirs.size(); ++l)
    w[l] = amp[l] * std::polar(1.0, omega * dot(dirs.incident(l), z));
  return w;
}

std::vector<complex> subspace_terms(const MsrMatrix& k, const SvdFactors& factors,
                                    const ImageGrid& grid, const SteeringConfig& cfg,
                                    double tau) {
  const std::size_t n = k.size();
  if (factors.size() != n) throw DomainError("subspace_terms: factors do not match matrix");
  const int rank = effective_rank(factors, tau);
  if (rank == 0) throw EmptySubspaceError("no singular value above threshold: empty signal subspace");
  const auto m = static_cast<std::size_t>(rank);
  const auto amp = steering_amplitudes(k.directions, cfg);
  const double omega = k.omega;

  // conj(W_l) = amp_l exp(-i omega theta_l.x x) exp(-i omega theta_l.y y).
  const auto nx = static_cast<std::size_t>(grid.nx());
  const auto ny = static_cast<std::size_t>(grid.ny());
  std::vector<complex> phase_x(nx * n), phase_y(ny * n);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t l = 0; l < n; ++l)
      phase_x[ix * n + l] = std::polar(amp[l], -omega * k.directions.incident(l).x * grid.x(static_cast<int>(ix)));
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t l = 0; l < n; ++l)
      phase_y[iy * n + l] = std::polar(1.0, -omega * k.directions.incident(l).y * grid.y(static_cast<int>(iy)));

  // Signal-subspace columns, contiguous: U_m and conj(V_m).
  std::vector<complex> u_cols(m * n), vbar_cols(m * n);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t l = 0; l < n; ++l) {
      u_cols[c * n + l] = factors.u(l, c);
      vbar_cols[c * n + l] = std::conj(factors.v(l, c));
    }

  std::vector<complex> out(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<complex> wbar(n);
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t ix = p % nx;
      const std::size_t iy = p / nx;
      for (std::size_t l = 0; l < n; ++l) wbar[l] = phase_x[ix * n + l] * phase_y[iy * n + l];
      complex sum = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        const complex* uc = &u_cols[c * n];
        const complex* vc = &vbar_cols[c * n];
        complex a = 0.0, b = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          a += wbar[l] * uc[l];
          b += wbar[l] * vc[l];
        }
        sum += a * b;
      }
      out[p] = sum;
    }
  });
  return out;
}

ImageMap map_single(const MsrMatrix& k, const SvdFactors& factors, const ImageGrid& grid,
                    const SteeringConfig& cfg, double tau) {
  const auto terms = subspace_terms(k, factors, grid, cfg, tau);
  ImageMap map{grid, std::vector<double>(terms.size()), Functional::sf(), {k.omega}};
  for (std::size_t p = 0; p < terms.size(); ++p) map.values[p] = std::abs(terms[p]);
  return map;
}

double frequency_weight(const Functional& functional, double omega) {
  if (!(omega > 0.0)) throw DomainError("frequency_weight: omega must be > 0");
  switch (functional.kind) {
    case FunctionalKind::single:
    case FunctionalKind::multi: return 1.0;
    case FunctionalKind::weighted:
      if (functional.power < 0) throw DomainError("frequency_weight: WMF power must be >= 0");
      return std::pow(omega, functional.power);
    case FunctionalKind::log:
      if (!(omega > 1.0))
        throw DomainError("frequency_weight: LOG weighting requires omega > 1 (ln omega > 0)");
      return std::log(omega);
  }
  return 1.0;
}

ImageMap combine_terms(std::span<const std::vector<complex>> terms,
                       std::span<const double> omegas, const Functional& functional,
                       const ImageGrid& grid) {
  if (terms.empty()) throw ConfigurationError("combine_terms: no frequencies");
  if (terms.size() != omegas.size()) throw ConfigurationError("combine_terms: size mismatch");
  const std::size_t count = functional.kind == FunctionalKind::single ? 1 : terms.size();
  std::vector<double> weights(count);
  for (std::size_t f = 0; f < count; ++f) {
    if (terms[f].size() != grid.size()) throw ConfigurationError("combine_terms: grid mismatch");
    weights[f] = frequency_weight(functional, omegas[f]);
  }
  const double scale = functional.kind == FunctionalKind::multi ? 1.0 / static_cast<double>(count) : 1.0;

  ImageMap map{grid, std::vector<double>(grid.size()), functional,
               std::vector<double>(omegas.begin(), omegas.begin() + static_cast<std::ptrdiff_t>(count))};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    complex sum = 0.0;
    for (std::size_t f = 0; f < count; ++f) sum += weights[f] * terms[f][p];
    map.values[p] = scale * std::abs(sum);
  }
  return map;
}

ImageMap map_multi(std::span<const SpectralData> data, const ImageGrid& grid,
                   const SteeringConfig& cfg, double tau, const Functional& functional) {
  if (data.empty()) throw ConfigurationError("map_multi: requires F >= 1");
  for (const SpectralData& d : data)
    if (!(d.msr.directions == data.front().msr.directions))
      throw ConfigurationError("map_multi: matrices use different direction sets");
  const std::size_t count = functional.kind == FunctionalKind::single ? 1 : data.size();
  std::vector<double> omegas;
  for (std::size_t f = 0; f < count; ++f) {
    omegas.push_back(data[f].msr.omega);
    frequency_weight(functional, omegas.back());  // validate before the expensive part
  }
  std::vector<std::vector<complex>> terms;
  terms.reserve(count);
  for (std::size_t f = 0; f < count; ++f)
    terms.push_back(subspace_terms(data[f].msr, data[f].factors, grid, cfg, tau));
  return combine_terms(terms, omegas, functional, grid);
}

void write_map_csv(std::ostream& os, const ImageMap& map) {
  os << "# msrimg image-map v1 functional=" << map.functional.tag() << " nx=" << map.grid.nx()
     << " ny=" << map.grid.ny() << '\n';
  os << "x,y,value,normalized\n";
  const auto norm = map.normalized();
  for (std::size_t p = 0; p < map.values.size(); ++p) {
    const Point2 z = map.grid.point(p);
    os << format_real(z.x) << ',' << format_real(z.y) << ',' << format_real(map.values[p]) << ','
       << format_real(norm[p]) << '\n';
  }
}

void write_map_pgm(std::ostream& os, const ImageMap& map, int bits) {
  if (bits != 8 && bits != 16) throw DomainError("write_map_pgm: bits must be 8 or 16");
  const int maxval = bits == 8 ? 255 : 65535;
  const auto norm = map.normalized();
  const int nx = map.grid.nx();
  const int ny = map.grid.ny();
  os << "P5\n# msrimg image-map v1 functional=" << map.functional.tag()
     << " orientation=y-up\n" << nx << ' ' << ny << '\n' << maxval << '\n';
  for (int row = 0; row < ny; ++row) {
    const int iy = ny - 1 - row;
    for (int ix = 0; ix < nx; ++ix) {
      const double v = std::clamp(norm[static_cast<std::size_t>(iy) * nx + ix], 0.0, 1.0);
      const auto level = static_cast<unsigned>(std::lround(v * maxval));
      if (bits == 16) os.put(static_cast<char>((level >> 8) & 0xFF));
      os.put(static_cast<char>(level & 0xFF));
    }
  }
}

}  // namespace msrimg
