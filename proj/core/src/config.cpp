#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "msrimg/errors.hpp"
#include "msrimg/harness.hpp"
#include "msrimg/io.hpp"

namespace msrimg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) parts.push_back(s.substr(start, i - start));
  }
  return parts;
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigurationError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigurationError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  const long long v = parse_integer(text, what);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigurationError(std::string(what) + ": out of range");
  return static_cast<int>(v);
}

std::vector<double> parse_reals(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (std::string_view part : split(text, ','))
    for (std::string_view token : split_ws(part)) out.push_back(parse_real(token, what));
  if (out.empty()) throw ConfigurationError(std::string(what) + ": empty list");
  return out;
}

bool parse_bool(std::string_view text, std::string_view what) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigurationError(std::string(what) + ": not a boolean: '" + t + "'");
}

template <class T>
std::string join(const std::vector<T>& items, auto&& format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += format(items[i]);
  }
  return out;
}

}  // namespace

ParametricCurve parse_curve(const std::string& text) {
  const std::string_view t = trim(text);
  const std::string name = lower(t);
  if (name.rfind("poly(", 0) != 0) return catalog_curve(name);
  if (t.back() != ')') throw ConfigurationError("parse_curve: missing ')' in '" + text + "'");
  const std::string_view body = t.substr(5, t.size() - 6);
  std::vector<double> xs, ys, range;
  for (std::string_view field : split(body, ';')) {
    const std::size_t colon = field.find(':');
    if (colon == std::string_view::npos)
      throw ConfigurationError("parse_curve: expected 'key: values' in '" + text + "'");
    const std::string key = lower(trim(field.substr(0, colon)));
    std::vector<double> values;
    for (std::string_view token : split_ws(field.substr(colon + 1)))
      values.push_back(parse_real(token, "parse_curve"));
    if (key == "x") xs = std::move(values);
    else if (key == "y") ys = std::move(values);
    else if (key == "s") range = std::move(values);
    else throw ConfigurationError("parse_curve: unknown key '" + key + "'");
  }
  if (xs.empty() || ys.empty()) throw ConfigurationError("parse_curve: x and y coefficients required");
  if (range.size() != 2) throw ConfigurationError("parse_curve: 's' needs exactly two values");
  return polynomial_curve(xs, ys, range[0], range[1], std::string(t));
}

ThinInclusion InclusionSpec::build() const {
  return ThinInclusion(parse_curve(curve), half_thickness, permittivity, permeability);
}

std::vector<InclusionSpec> ExperimentConfig::inclusions() const {
  const std::size_t n = curves.size();
  if (n == 0) throw ConfigurationError("config: at least one curve is required");
  auto pick = [n](const std::vector<double>& v, const char* what) {
    if (v.size() != 1 && v.size() != n)
      throw ConfigurationError(std::string("config: '") + what +
                               "' must hold one value or one per curve");
    return [&v](std::size_t i) { return v.size() == 1 ? v.front() : v[i]; };
  };
  const auto e = pick(eps, "eps");
  const auto m = pick(mu, "mu");
  const auto t = pick(h, "h");
  std::vector<InclusionSpec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({curves[i], t(i), e(i), m(i)});
  return out;
}

void ExperimentConfig::validate() const {
  for (const InclusionSpec& spec : inclusions()) spec.build();
  if (directions < 2) throw ConfigurationError("config: N must be >= 2");
  if (frequencies < 1) throw ConfigurationError("config: F must be >= 1");
  if (!(lambda_max > 0.0) || !(lambda_min > 0.0) || !std::isfinite(lambda_max))
    throw ConfigurationError("config: wavelengths must be positive and finite");
  if (frequencies > 1 && !(lambda_min < lambda_max))
    throw ConfigurationError("config: requires lambda_min < lambda_max when F > 1");
  if (snr_db && !std::isfinite(*snr_db)) throw ConfigurationError("config: snr_db must be finite");
  if (functionals.empty()) throw ConfigurationError("config: no functionals requested");
  if (grid_nx < 2 || grid_ny < 2) throw ConfigurationError("config: grid needs >= 2 points per axis");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigurationError("config: domain half-width must be positive");
  if (!(tau > 0.0) || !(tau < 1.0)) throw ConfigurationError("config: tau must lie in (0, 1)");
  SteeringConfig{c, true}.validate();
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  const auto real = [](double v) { return format_real(v); };
  os << "# msrimg config v1\n";
  os << "name = " << name << '\n';
  os << "curves = " << join(curves, [](const std::string& s) { return s; }) << '\n';
  os << "eps = " << join(eps, real) << '\n';
  os << "mu = " << join(mu, real) << '\n';
  os << "h = " << join(h, real) << '\n';
  os << "N = " << directions << '\n';
  os << "F = " << frequencies << '\n';
  os << "lambda_max = " << format_real(lambda_max) << '\n';
  os << "lambda_min = " << format_real(lambda_min) << '\n';
  os << "snr_db = " << (snr_db ? format_real(*snr_db) : std::string("none")) << '\n';
  os << "seed = " << seed << '\n';
  os << "functionals = " << join(functionals, [](const Functional& f) { return f.tag(); }) << '\n';
  os << "grid = " << grid_nx << 'x' << grid_ny << '\n';
  os << "domain = " << format_real(half_width) << '\n';
  os << "tau = " << format_real(tau) << '\n';
  os << "c = " << format_real(c[0]) << ',' << format_real(c[1]) << ',' << format_real(c[2]) << '\n';
  os << "expected_failure = " << (expected_failure ? "true" : "false") << '\n';
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4"}; }

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  if (name == "fig1") {
    cfg.curves = {"sigma1"};
  } else if (name == "fig2") {
    cfg.curves = {"sigma2"};
  } else if (name == "fig3") {
    cfg.curves = {"sigma1", "sigma2"};
    cfg.expected_failure = true;
  } else if (name == "fig4") {
    cfg.curves = {"sigma1", "sigma2"};
    cfg.eps = {5.0, 10.0};
    cfg.mu = {5.0, 10.0};
  } else {
    throw ConfigurationError("unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key_in, std::string_view value_in) {
  const std::string key = lower(trim(key_in));
  const std::string_view value = trim(value_in);
  if (key == "preset") {
    const auto out = cfg.out_dir;
    cfg = preset(lower(value));
    cfg.out_dir = out;
  } else if (key == "name") {
    if (value.empty()) throw ConfigurationError("name: empty");
    cfg.name = std::string(value);
  } else if (key == "curve" || key == "curves") {
    cfg.curves.clear();
    for (std::string_view part : split(value, ','))
      if (!part.empty()) cfg.curves.emplace_back(part);
    if (cfg.curves.empty()) throw ConfigurationError(key + ": empty");
    if (key == "curve" && cfg.curves.size() != 1)
      throw ConfigurationError("curve: expects a single curve, use 'curves' for several");
  } else if (key == "eps") {
    cfg.eps = parse_reals(value, key);
  } else if (key == "mu") {
    cfg.mu = parse_reals(value, key);
  } else if (key == "h") {
    cfg.h = parse_reals(value, key);
  } else if (key == "n") {
    cfg.directions = parse_int(value, key);
  } else if (key == "f") {
    cfg.frequencies = parse_int(value, key);
  } else if (key == "lambda_max" || key == "lambda-max") {
    cfg.lambda_max = parse_real(value, key);
  } else if (key == "lambda_min" || key == "lambda-min") {
    cfg.lambda_min = parse_real(value, key);
  } else if (key == "snr_db" || key == "snr-db") {
    const std::string v = lower(value);
    if (v == "none" || v == "inf" || v == "+inf" || v == "clean") cfg.snr_db.reset();
    else cfg.snr_db = parse_real(value, key);
  } else if (key == "seed") {
    const long long s = parse_integer(value, key);
    if (s < 0) throw ConfigurationError("seed: must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "functional" || key == "functionals") {
    std::vector<Functional> list;
    for (std::string_view part : split(value, ','))
      if (!part.empty()) {
        const Functional f = Functional::parse(std::string(part));
        if (std::find(list.begin(), list.end(), f) == list.end()) list.push_back(f);
      }
    if (list.empty()) throw ConfigurationError(key + ": empty");
    cfg.functionals = std::move(list);
  } else if (key == "grid") {
    const auto parts = split(lower(value), 'x');
    if (parts.size() == 1) {
      cfg.grid_nx = cfg.grid_ny = parse_int(parts[0], key);
    } else if (parts.size() == 2) {
      cfg.grid_nx = parse_int(parts[0], key);
      cfg.grid_ny = parse_int(parts[1], key);
    } else {
      throw ConfigurationError("grid: expected 'R' or 'NXxNY'");
    }
  } else if (key == "domain") {
    cfg.half_width = parse_real(value, key);
  } else if (key == "tau") {
    cfg.tau = parse_real(value, key);
  } else if (key == "c") {
    const auto v = parse_reals(value, key);
    if (v.size() != 3) throw ConfigurationError("c: expected three components");
    cfg.c = {v[0], v[1], v[2]};
  } else if (key == "expected_failure") {
    cfg.expected_failure = parse_bool(value, key);
  } else if (key == "out_dir" || key == "out-dir") {
    cfg.out_dir = std::filesystem::path(std::string(value));
  } else {
    throw ConfigurationError("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigurationError("config line " + std::to_string(number) + ": expected key = value");
    try {
      apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1));
    } catch (Error& e) {
      e.add_context("config line " + std::to_string(number));
      throw;
    }
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  try {
    return parse_config(in);
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

}  // namespace msrimg
