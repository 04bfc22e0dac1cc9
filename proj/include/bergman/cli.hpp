#pragma once

// Command-line front end of bergman_lab.
//
//   bergman_lab kernel     --domain D --point Z [--base W]
//   bergman_lab metric     --domain D --point Z
//   bergman_lab curvature  --domain D --point Z [--direction X]
//   bergman_lab repcoords  --domain D --base P --point Z
//   bergman_lab diastasis  --domain D --base P --point Z
//   bergman_lab scan       --domain D [--base P] [--grid polar|cartesian] [--n N]
//   bergman_lab verify     [--suite NAME]...
//
// Exit codes: 0 success, 1 a verification suite failed, 2 configuration or
// parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bergman/domains.hpp"
#include "bergman/geometry.hpp"
#include "bergman/gram.hpp"
#include "bergman/io.hpp"
#include "bergman/kernels.hpp"
#include "bergman/sampling.hpp"
#include "bergman/verify.hpp"

namespace bergman::cli {

inline constexpr const char* kLiteralHelp =
    "Points are comma-separated complex literals: a, ai, a+bi or a-bi with decimal reals, e.g. 0.3+0.4i,-0.1i";

struct Options {
  std::string subcommand;
  std::string domain_path;
  std::string point;
  std::string base;
  std::string direction;
  std::string output;
  std::string format = "json";
  std::string grid = "polar";
  std::string cache;
  int grid_n = 16;
  int directions = 16;
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
  std::optional<int> quad_order;
  std::vector<std::string> suites;
};

namespace detail {

inline Point parse_field(const std::string& text, const std::string& field) {
  try {
    return parse_point(text);
  } catch (const Error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
  }
}

inline Point require_point(const std::string& text, const std::string& field, const Domain& d) {
  if (text.empty()) throw Error(ErrorCode::ConfigError, "field '" + field + "': required");
  Point p = parse_field(text, field);
  if (static_cast<int>(p.size()) != d.dim()) {
    throw Error(ErrorCode::ConfigError, "field '" + field + "': expected " + std::to_string(d.dim()) +
                                            " coordinates, got " + std::to_string(p.size()));
  }
  if (!contains(d, p)) throw Error(ErrorCode::ConfigError, "field '" + field + "': point lies outside the domain");
  return p;
}

inline std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("BERGMAN_LAB_SEED")) {
    const std::string s(env);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
      throw Error(ErrorCode::ConfigError, "field 'BERGMAN_LAB_SEED': not an unsigned integer");
    }
    return v;
  }
  return 1;
}

inline KernelPtr make_kernel(const Options& o, const Domain& d) {
  if (!o.degree && !o.quad_order) return kernel_for(d);
  const int degree = o.degree.value_or(30);
  const int order = o.quad_order.value_or(std::max(degree + 2, 32));
  if (!o.cache.empty()) {
    if (std::ifstream(o.cache)) {
      KernelPtr k = load_gram_cache(o.cache, d);
      const auto& info = k->provenance();
      if (info.degree == degree && info.quad_order == order) return k;
    }
    GramBasis basis = build_gram_basis(d, degree, order);
    save_gram_cache(o.cache, d, basis);
    return std::make_shared<GramKernel>(d, std::move(basis));
  }
  return gram_kernel(d, degree, order);
}

inline json provenance_json(const KernelModel& k) {
  const auto& p = k.provenance();
  json j{{"kind", to_string(p.kind)}};
  if (p.kind == Provenance::gram_numerical) {
    j["degree"] = p.degree;
    j["quad_order"] = p.quad_order;
    j["condition_estimate"] = p.condition_estimate;
  }
  return j;
}

inline json envelope(const std::string& subcommand, const Domain& d, const KernelModel& k) {
  return json{{"schema_version", kSchemaVersion},
              {"subcommand", subcommand},
              {"domain", domain_to_json(d)},
              {"kernel", provenance_json(k)}};
}

/// Directions used for HSC statistics: the coordinate axes, then seeded
/// random unit vectors.
inline std::vector<Point> hsc_directions(int n, int random_count, std::uint64_t seed) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Point e(n, 0.0);
    e[i] = 1.0;
    out.push_back(e);
  }
  Rng rng(seed);
  for (int i = 0; i < random_count; ++i) out.push_back(sample_direction(n, rng));
  return out;
}

inline std::vector<Point> scan_grid(const Domain& d, const Point& anchor, const std::string& kind, int n) {
  const double outer = d.kind() == DomainKind::pushforward || d.kind() == DomainKind::product
                           ? d.circumscribing_radius()
                           : 1.0;
  std::vector<Point> pts;
  auto push = [&](cplx z) {
    Point p = anchor;
    p[0] = z;
    if (contains(d, p)) pts.push_back(std::move(p));
  };
  if (kind == "polar") {
    const double inner = d.kind() == DomainKind::annulus ? d.inner_radius() : 0.0;
    for (int i = 0; i < n; ++i) {
      const double rad = inner + (outer - inner) * (i + 0.5) / n;
      for (int j = 0; j < 2 * n; ++j) push(std::polar(rad, 2.0 * kPi * j / (2 * n)));
    }
  } else if (kind == "cartesian") {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        push(cplx(-outer + 2.0 * outer * (j + 0.5) / n, -outer + 2.0 * outer * (i + 0.5) / n));
      }
    }
  } else {
    throw Error(ErrorCode::ConfigError, "field 'grid': expected polar or cartesian");
  }
  return pts;
}

inline void write_complex_cols(std::vector<std::string>& cols, const std::string& prefix, int n) {
  for (int i = 0; i < n; ++i) {
    cols.push_back("re_" + prefix + std::to_string(i + 1));
    cols.push_back("im_" + prefix + std::to_string(i + 1));
  }
}

inline void push_point(std::vector<double>& row, const Point& p) {
  for (const auto& z : p) {
    row.push_back(z.real());
    row.push_back(z.imag());
  }
}

inline int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const std::uint64_t seed = resolve_seed(o);
  std::vector<const SuiteEntry*> chosen;
  for (const auto& name : o.suites) {
    const SuiteEntry* found = nullptr;
    for (const auto& e : suite_registry())
      if (e.name == name) found = &e;
    if (!found) throw Error(ErrorCode::ConfigError, "field 'suite': unknown suite '" + name + "'");
    chosen.push_back(found);
  }
  if (chosen.empty()) {
    for (const auto& e : suite_registry()) chosen.push_back(&e);
  }
  bool all = true;
  std::ostringstream table;
  table << "suite                     status  runtime_ms\n";
  for (const auto* e : chosen) {
    const SuiteResult r = e->run(seed);
    all = all && r.passed;
    out << suite_json(r).dump() << "\n";
    std::string name = r.name;
    name.resize(std::max<std::size_t>(name.size(), 26), ' ');
    table << name << (r.passed ? "PASS    " : "FAIL    ") << r.runtime_ms << "\n";
    if (!r.passed) table << "  witness: " << r.witness << "\n";
  }
  err << table.str();
  return all ? 0 : 1;
}

inline void run_geometry(const Options& o, std::ostream& out) {
  const Domain d = load_domain(o.domain_path);
  const KernelPtr k = make_kernel(o, d);
  const bool csv = o.format == "csv";
  const int n = d.dim();
  json j = envelope(o.subcommand, d, *k);
  CsvWriter w(out);
  std::vector<std::string> cols;

  if (o.subcommand == "kernel") {
    const Point z = require_point(o.point, "point", d);
    const Point b = o.base.empty() ? z : require_point(o.base, "base", d);
    const cplx v = k->eval(z, b);
    if (csv) {
      write_complex_cols(cols, "z", n);
      write_complex_cols(cols, "w", n);
      cols.insert(cols.end(), {"re_K", "im_K"});
      w.header(cols);
      std::vector<double> row;
      push_point(row, z);
      push_point(row, b);
      row.insert(row.end(), {v.real(), v.imag()});
      w.row(row);
      return;
    }
    j["point"] = point_json(z);
    j["base"] = point_json(b);
    j["K"] = complex_json(v);
  } else if (o.subcommand == "metric") {
    const Point z = require_point(o.point, "point", d);
    const MetricTensor m = metric_at(*k, z);
    if (csv) {
      w.header({"alpha", "beta", "re_g", "im_g"});
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) w.row({double(a), double(b), m.g(a, b).real(), m.g(a, b).imag()});
      return;
    }
    j["metric"] = metric_json(m);
    j["det"] = m.det();
    j["min_eigenvalue"] = m.min_eigenvalue();
  } else if (o.subcommand == "curvature") {
    const Point z = require_point(o.point, "point", d);
    if (!o.direction.empty()) {
      const Point x = parse_field(o.direction, "direction");
      if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::ConfigError, "field 'direction': wrong dimension");
      if (norm2(x) == 0.0) throw Error(ErrorCode::ConfigError, "field 'direction': must be nonzero");
      const double h = hsc(*k, z, x);
      if (csv) {
        write_complex_cols(cols, "z", n);
        write_complex_cols(cols, "x", n);
        cols.push_back("hsc");
        w.header(cols);
        std::vector<double> row;
        push_point(row, z);
        push_point(row, x);
        row.push_back(h);
        w.row(row);
        return;
      }
      j["point"] = point_json(z);
      j["direction"] = point_json(x);
      j["hsc"] = h;
    } else {
      const CurvatureTensor t = curvature_tensor(*k, z);
      if (csv) {
        w.header({"i", "j", "k", "l", "re_R", "im_R"});
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
              for (int e = 0; e < n; ++e) w.row({double(a), double(b), double(c), double(e), t(a, b, c, e).real(), t(a, b, c, e).imag()});
        return;
      }
      j["curvature"] = curvature_json(t);
    }
  } else if (o.subcommand == "repcoords") {
    const Point p = require_point(o.base, "base", d);
    const Point z = require_point(o.point, "point", d);
    const RepCoords rc = rep_coords(*k, p, z);
    if (csv) {
      cols = {"alpha", "re_w", "im_w"};
      w.header(cols);
      for (int a = 0; a < n; ++a) w.row({double(a), rc.w(a).real(), rc.w(a).imag()});
      return;
    }
    json wj = json::array();
    for (int a = 0; a < n; ++a) wj.push_back(complex_json(rc.w(a)));
    j["base"] = point_json(p);
    j["point"] = point_json(z);
    j["w"] = wj;
    j["quadratic_form"] = rc.quadratic_form();
    j["jacobian_det"] = complex_json(rc.jacobian_det());
  } else if (o.subcommand == "diastasis") {
    const Point p = require_point(o.base, "base", d);
    const Point z = require_point(o.point, "point", d);
    const double phi = diastasis(*k, p, z);
    std::optional<double> closed;
    if (const auto c2 = declared_c2(d); c2 && std::isfinite(phi)) closed = diastasis_closed_form(*k, p, z, *c2);
    if (csv) {
      write_complex_cols(cols, "p", n);
      write_complex_cols(cols, "z", n);
      cols.push_back("phi");
      w.header(cols);
      std::vector<double> row;
      push_point(row, p);
      push_point(row, z);
      row.push_back(phi);
      w.row(row);
      return;
    }
    j["base"] = point_json(p);
    j["point"] = point_json(z);
    j["diastasis"] = std::isfinite(phi) ? json(phi) : json("inf");
    if (closed) j["diastasis_closed_form"] = *closed;
  } else if (o.subcommand == "scan") {
    const Point p = o.base.empty() ? [&] {
      // Default base: a point near the middle of the domain.
      Point c(n, 0.0);
      if (d.kind() == DomainKind::annulus) c[0] = 0.5 * (1.0 + d.inner_radius());
      if (!contains(d, c)) throw Error(ErrorCode::ConfigError, "field 'base': required for this domain");
      return c;
    }()
                                   : require_point(o.base, "base", d);
    const Point anchor = o.point.empty() ? Point(n, 0.0) : parse_field(o.point, "point");
    if (static_cast<int>(anchor.size()) != n) throw Error(ErrorCode::ConfigError, "field 'point': wrong dimension");
    if (o.grid_n < 1) throw Error(ErrorCode::ConfigError, "field 'n': must be positive");
    const auto dirs = hsc_directions(n, o.directions, resolve_seed(o));
    write_complex_cols(cols, "z", n);
    cols.insert(cols.end(), {"K", "det_g", "hsc_min", "hsc_max", "phi", "grad_len_sq", "quadratic_form",
                             "identity_residual", "volume_residual", "closed_form_residual"});
    w.header(cols);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const Point& z : scan_grid(d, anchor, o.grid, o.grid_n)) {
      std::vector<double> row;
      push_point(row, z);
      try {
        const GeometryReport r = geometry_report(*k, p, z, dirs);
        double lo = 1e300, hi = -1e300;
        for (const auto& s : r.hsc_samples) {
          lo = std::min(lo, s.value);
          hi = std::max(hi, s.value);
        }
        const bool finite = std::isfinite(r.diastasis);
        row.insert(row.end(), {r.kernel_diagonal, r.volume_coeff, lo, hi, r.diastasis,
                               finite ? r.gradient_length_sq : nan, finite ? r.quadratic_form : nan,
                               finite ? std::abs(r.gradient_length_sq - r.gradient_length_sq_rep) : nan,
                               r.volume_residual.value_or(nan), r.diastasis_closed_form_residual.value_or(nan)});
      } catch (const Error& e) {
        // Rows where a quantity is undefined (kernel zero, series limits) keep
        // their coordinates and carry NaN.
        row.resize(2 * n + 10, nan);
      }
      w.row(row);
    }
    return;
  }
  out << j.dump(2) << "\n";
}

}  // namespace detail

/// Runs the tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Bergman kernels, metrics and curvature", "bergman_lab"};
  app.footer(kLiteralHelp);
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed_value = 0;
  int degree = 0, quad = 0;

  auto add_common = [&](CLI::App* sub, bool needs_domain) {
    if (needs_domain) sub->add_option("--domain", o.domain_path, "Domain config file (JSON)")->required();
    sub->add_option("--output,-o", o.output, "Output file (default stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed_value, "Seed (default $BERGMAN_LAB_SEED, else 1)");
    if (needs_domain) {
      sub->add_option("--degree", degree, "Use the Gram kernel of this degree");
      sub->add_option("--quad-order", quad, "Quadrature order for the Gram kernel");
      sub->add_option("--cache", o.cache, "Gram cache file (read if valid, written otherwise)");
    }
  };

  auto* kernel = app.add_subcommand("kernel", "Evaluate K(z, w)");
  add_common(kernel, true);
  kernel->add_option("--point", o.point, "z")->required();
  kernel->add_option("--base", o.base, "w (default z)");

  auto* metric = app.add_subcommand("metric", "Bergman metric g at a point");
  add_common(metric, true);
  metric->add_option("--point", o.point, "Point")->required();

  auto* curvature = app.add_subcommand("curvature", "Curvature tensor, or HSC along --direction");
  add_common(curvature, true);
  curvature->add_option("--point", o.point, "Point")->required();
  curvature->add_option("--direction", o.direction, "Direction X for the holomorphic sectional curvature");

  auto* rep = app.add_subcommand("repcoords", "Representative coordinates of --point with base --base");
  add_common(rep, true);
  rep->add_option("--base", o.base, "Base point p")->required();
  rep->add_option("--point", o.point, "Query point z")->required();

  auto* dia = app.add_subcommand("diastasis", "Diastasis relative to --base");
  add_common(dia, true);
  dia->add_option("--base", o.base, "Base point z0")->required();
  dia->add_option("--point", o.point, "Point z")->required();

  auto* scan = app.add_subcommand("scan", "Geometry CSV over a planar grid in the first coordinate");
  add_common(scan, true);
  scan->add_option("--base", o.base, "Base point for diastasis and representative coordinates");
  scan->add_option("--point", o.point, "Anchor for the remaining coordinates (default 0)");
  scan->add_option("--grid", o.grid, "Grid kind")->check(CLI::IsMember({"polar", "cartesian"}));
  scan->add_option("--n", o.grid_n, "Grid resolution");
  scan->add_option("--directions", o.directions, "Random HSC directions per point");

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  add_common(verify, false);
  std::string suite_list;
  for (const auto& e : suite_registry()) suite_list += (suite_list.empty() ? "" : ", ") + e.name;
  verify->add_option("--suite", o.suites, "Suite name (repeatable; default all): " + suite_list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg, errs;
    const int code = app.exit(e, msg, errs);
    out << msg.str();
    err << errs.str();
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : app.get_subcommands()) o.subcommand = sub->get_name();
  auto* sub = app.get_subcommand(o.subcommand);
  if (sub->count("--seed")) o.seed = seed_value;
  if (sub->get_option_no_throw("--degree") && sub->count("--degree")) o.degree = degree;
  if (sub->get_option_no_throw("--quad-order") && sub->count("--quad-order")) o.quad_order = quad;
  if (o.subcommand == "scan") o.format = "csv";

  std::ofstream file;
  std::ostringstream buffer;
  try {
    int code = 0;
    if (o.subcommand == "verify") {
      code = detail::run_verify(o, buffer, err);
    } else {
      detail::run_geometry(o, buffer);
    }
    if (!o.output.empty()) {
      file.open(o.output);
      if (!file) throw Error(ErrorCode::ConfigError, "field 'output': cannot open '" + o.output + "'");
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bergman::cli
