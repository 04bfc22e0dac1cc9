#pragma once

// Text formats: complex literals, domain configs, Gram cache files, CSV and
// JSON reports.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/geometry.hpp"
#include "bergman/gram.hpp"
#include "bergman/log_jet.hpp"

namespace bergman {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Numbers

/// Shortest decimal that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// 17 significant digits, the CSV contract. Negative zero prints as 0.
inline std::string format_csv(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

namespace detail {

// Reads an unsigned decimal real ("1", "0.25", "1.5e-3") at s[pos].
inline bool read_unsigned_real(std::string_view s, std::size_t& pos, double& out) {
  const std::size_t start = pos;
  auto digits = [&] {
    const std::size_t b = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    return pos - b;
  };
  std::size_t nd = digits();
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    nd += digits();
  }
  if (nd == 0) return false;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::size_t save = pos++;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    if (digits() == 0) pos = save;
  }
  const auto res = std::from_chars(s.data() + start, s.data() + pos, out);
  return res.ec == std::errc() && res.ptr == s.data() + pos;
}

}  // namespace detail

/// Parses `a`, `ai`, `a+bi` or `a-bi` with decimal reals a, b (a may carry a
/// leading minus sign).
inline cplx parse_complex(std::string_view s) {
  auto fail = [&]() -> cplx {
    throw Error(ErrorCode::ConfigError, "malformed complex literal '" + std::string(s) + "'");
  };
  std::size_t pos = 0;
  double sign = 1.0;
  if (pos < s.size() && s[pos] == '-') {
    sign = -1.0;
    ++pos;
  }
  double a = 0.0;
  if (!detail::read_unsigned_real(s, pos, a)) return fail();
  a *= sign;
  if (pos == s.size()) return {a, 0.0};
  if (s[pos] == 'i' && pos + 1 == s.size()) return {0.0, a};
  if (s[pos] != '+' && s[pos] != '-') return fail();
  const double bsign = s[pos] == '-' ? -1.0 : 1.0;
  ++pos;
  double b = 0.0;
  if (!detail::read_unsigned_real(s, pos, b)) return fail();
  if (pos + 1 != s.size() || s[pos] != 'i') return fail();
  return {a, bsign * b};
}

/// Canonical literal: shortest round-trip reals, `a`, `bi` or `a+bi`/`a-bi`.
inline std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return format_real(z.real());
  if (z.real() == 0.0 && !std::signbit(z.real())) return format_real(z.imag()) + "i";
  std::string out = format_real(z.real());
  if (std::signbit(z.imag())) {
    out += "-" + format_real(-z.imag());
  } else {
    out += "+" + format_real(z.imag());
  }
  return out + "i";
}

/// Comma-separated complex literals.
inline Point parse_point(std::string_view s) {
  Point p;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    const std::string_view item = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    p.push_back(parse_complex(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

inline std::string format_point(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += format_complex(p[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Domain configs

namespace detail {

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

inline const json& require_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) config_error(path + "." + key, "missing");
  return *it;
}

inline cplx json_complex(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_complex(j.get<std::string>());
    } catch (const Error& e) {
      config_error(path, e.what());
    }
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  config_error(path, "expected a number, a complex literal string or [re, im]");
}

inline int json_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_error(path, "expected an integer");
  return j.get<int>();
}

inline double json_real(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

inline BiholoMap map_from_json(const json& j, const std::string& path, int dim) {
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    const json& k = require_field(j, "kind", path);
    if (!k.is_string()) config_error(path + ".kind", "expected a string");
    kind = k.get<std::string>();
  } else {
    config_error(path, "expected a map name or object");
  }
  if (kind == "hartogs") return BiholoMap::hartogs();
  if (kind == "zimmer") return BiholoMap::zimmer();
  if (kind == "linear") {
    if (!j.is_object()) config_error(path, "linear map needs fields A and b");
    const json& a = require_field(j, "A", path);
    if (!a.is_array() || static_cast<int>(a.size()) != dim) config_error(path + ".A", "expected a square matrix of the domain dimension");
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      const std::string rp = path + ".A[" + std::to_string(r) + "]";
      if (!a[r].is_array() || static_cast<int>(a[r].size()) != dim) config_error(rp, "expected a row of length " + std::to_string(dim));
      for (int c = 0; c < dim; ++c) m(r, c) = json_complex(a[r][c], rp + "[" + std::to_string(c) + "]");
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    if (j.contains("b")) {
      const json& bj = j["b"];
      if (!bj.is_array() || static_cast<int>(bj.size()) != dim) config_error(path + ".b", "expected a vector of the domain dimension");
      for (int r = 0; r < dim; ++r) b(r) = json_complex(bj[r], path + ".b[" + std::to_string(r) + "]");
    }
    try {
      return BiholoMap::linear(m, b);
    } catch (const Error& e) {
      config_error(path, e.what());
    }
  }
  config_error(path + ".kind", "unknown map '" + kind + "'");
}

inline Domain domain_from_json(const json& j, const std::string& path) {
  const json& k = require_field(j, "kind", path);
  if (!k.is_string()) config_error(path + ".kind", "expected a string");
  const std::string kind = k.get<std::string>();
  try {
    if (kind == "disc") return Domain::disc();
    if (kind == "punctured_disc") return Domain::punctured_disc();
    if (kind == "ball") return Domain::ball(json_int(require_field(j, "n", path), path + ".n"));
    if (kind == "polydisc") return Domain::polydisc(json_int(require_field(j, "n", path), path + ".n"));
    if (kind == "annulus") return Domain::annulus(json_real(require_field(j, "r", path), path + ".r"));
    if (kind == "product") {
      const json& f = require_field(j, "factors", path);
      if (!f.is_array() || f.empty()) config_error(path + ".factors", "expected a non-empty array");
      std::vector<Domain> factors;
      for (std::size_t i = 0; i < f.size(); ++i) {
        factors.push_back(domain_from_json(f[i], path + ".factors[" + std::to_string(i) + "]"));
      }
      return Domain::product(std::move(factors));
    }
    if (kind == "pushforward") {
      Domain base = domain_from_json(require_field(j, "base", path), path + ".base");
      BiholoMap map = map_from_json(require_field(j, "map", path), path + ".map", base.dim());
      return Domain::pushforward(std::move(base), std::move(map));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(path, e.what());
  }
  config_error(path + ".kind", "unknown domain kind '" + kind + "'");
}

}  // namespace detail

inline Domain domain_from_json(const json& j) { return detail::domain_from_json(j, "domain"); }

inline Domain parse_domain(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("field 'domain': invalid JSON: ") + e.what());
  }
  return domain_from_json(j);
}

inline Domain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "field 'domain': cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain(ss.str());
}

// Negative zero is folded to zero.
inline json complex_json(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

inline json map_to_json(const BiholoMap& m) {
  if (m.kind() != MapKind::linear) return to_string(m.kind());
  json a = json::array();
  for (int r = 0; r < m.dim(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(complex_json(m.matrix()(r, c)));
    a.push_back(row);
  }
  json b = json::array();
  for (int r = 0; r < m.dim(); ++r) b.push_back(complex_json(m.offset()(r)));
  return json{{"kind", "linear"}, {"A", a}, {"b", b}};
}

/// Canonical JSON form (keys sorted by the json object type).
inline json domain_to_json(const Domain& d) {
  json j{{"kind", to_string(d.kind())}};
  switch (d.kind()) {
    case DomainKind::ball:
    case DomainKind::polydisc: j["n"] = d.dim(); break;
    case DomainKind::annulus: j["r"] = d.inner_radius(); break;
    case DomainKind::product: {
      json f = json::array();
      for (const auto& x : d.factors()) f.push_back(domain_to_json(x));
      j["factors"] = f;
      break;
    }
    case DomainKind::pushforward:
      j["base"] = domain_to_json(d.base());
      j["map"] = map_to_json(d.map());
      break;
    default: break;
  }
  return j;
}

/// FNV-1a over the canonical JSON text.
inline std::uint64_t domain_hash(const Domain& d) {
  const std::string text = domain_to_json(d).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Gram cache

namespace detail {

inline json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) config_error(path, "expected a matrix");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != n) config_error(path, "expected a square matrix");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = json_complex(j[r][c], path);
  }
  return m;
}

}  // namespace detail

inline json gram_cache_json(const Domain& d, const GramBasis& b) {
  return json{{"schema_version", kSchemaVersion},
              {"domain", domain_to_json(d)},
              {"domain_hash", hex64(domain_hash(d))},
              {"degree", b.degree},
              {"quad_order", b.quad_order},
              {"diagonal", b.diagonal},
              {"condition_estimate", b.condition_estimate},
              {"exponents", b.exponents},
              {"gram", detail::matrix_json(b.gram)},
              {"factor", detail::matrix_json(b.factor)}};
}

/// Restores a Gram basis; refuses caches written for a different domain.
inline GramBasis gram_basis_from_json(const Domain& d, const json& j) {
  using detail::config_error;
  using detail::require_field;
  if (require_field(j, "schema_version", "cache") != kSchemaVersion) config_error("cache.schema_version", "unsupported version");
  if (require_field(j, "domain_hash", "cache") != hex64(domain_hash(d))) {
    config_error("cache.domain_hash", "cache was written for a different domain");
  }
  GramBasis b;
  b.degree = detail::json_int(require_field(j, "degree", "cache"), "cache.degree");
  b.quad_order = detail::json_int(require_field(j, "quad_order", "cache"), "cache.quad_order");
  b.diagonal = require_field(j, "diagonal", "cache").get<bool>();
  b.condition_estimate = detail::json_real(require_field(j, "condition_estimate", "cache"), "cache.condition_estimate");
  b.exponents = require_field(j, "exponents", "cache").get<std::vector<std::vector<int>>>();
  b.gram = detail::matrix_from_json(require_field(j, "gram", "cache"), "cache.gram");
  b.factor = detail::matrix_from_json(require_field(j, "factor", "cache"), "cache.factor");
  if (b.gram.rows() != static_cast<Eigen::Index>(b.exponents.size()) || b.factor.rows() != b.gram.rows()) {
    config_error("cache.gram", "size does not match the exponent list");
  }
  return b;
}

inline void save_gram_cache(const std::string& path, const Domain& d, const GramBasis& b) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write cache '" + path + "'");
  out << gram_cache_json(d, b).dump() << "\n";
}

inline KernelPtr load_gram_cache(const std::string& path, const Domain& d) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "field 'cache': cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("field 'cache': invalid JSON: ") + e.what());
  }
  return std::make_shared<GramKernel>(d, gram_basis_from_json(d, j));
}

// ---------------------------------------------------------------------------
// Reports

inline json point_json(const Point& p) {
  json a = json::array();
  for (const auto& z : p) a.push_back(complex_json(z));
  return a;
}

inline json metric_json(const MetricTensor& m) {
  return json{{"base", point_json(m.base)}, {"g", detail::matrix_json(m.g)}};
}

inline json curvature_json(const CurvatureTensor& t) {
  json r = json::array();
  for (const auto& v : t.r) r.push_back(complex_json(v));
  return json{{"base", point_json(t.base)}, {"n", t.n}, {"layout", "row-major (i, jbar, k, lbar)"}, {"R", r}};
}

/// Jet coefficients keyed by "a|b" exponent pairs (holomorphic | conjugate).
inline json jet_json(const PolarizedJet& lj) {
  const auto& layout = *lj.jet().layout();
  const int n = lj.dim();
  json table = json::object();
  for (int i = 0; i < layout.size(); ++i) {
    const auto e = layout.exponents(i);
    std::string key;
    for (int v = 0; v < 2 * n; ++v) {
      if (v == n) key += "|";
      else if (v > 0) key += ",";
      key += std::to_string(e[v]);
    }
    table[key] = complex_json(lj.jet().coeffs()[i]);
  }
  return json{{"schema_version", kSchemaVersion}, {"base", point_json(lj.base())}, {"coefficients", table}};
}

inline json report_json(const GeometryReport& r) {
  json hs = json::array();
  for (const auto& s : r.hsc_samples) hs.push_back(json{{"direction", point_json(s.direction)}, {"value", s.value}});
  json w = json::array();
  for (Eigen::Index i = 0; i < r.rep_coords.size(); ++i) w.push_back(complex_json(r.rep_coords(i)));
  json out{{"schema_version", kSchemaVersion},
           {"base", point_json(r.base)},
           {"point", point_json(r.point)},
           {"kernel_diagonal", r.kernel_diagonal},
           {"metric", metric_json(r.metric)},
           {"curvature", curvature_json(r.curvature)},
           {"hsc_samples", hs},
           {"rep_coords", w},
           {"quadratic_form", r.quadratic_form},
           {"gradient_length_sq", r.gradient_length_sq},
           {"gradient_length_sq_rep_coords", r.gradient_length_sq_rep},
           {"volume_coeff", r.volume_coeff},
           {"c2_estimate", r.c2_estimate}};
  out["diastasis"] = std::isfinite(r.diastasis) ? json(r.diastasis) : json("inf");
  out["c2_declared"] = r.c2_declared ? json(*r.c2_declared) : json(nullptr);
  out["volume_residual"] = r.volume_residual ? json(*r.volume_residual) : json(nullptr);
  out["diastasis_closed_form_residual"] =
      r.diastasis_closed_form_residual ? json(*r.diastasis_closed_form_residual) : json(nullptr);
  return out;
}

/// CSV with a header row; every number at 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_csv(values[i]);
    out_ << "\n";
  }

 private:
  std::ostream& out_;
};

}  // namespace bergman
