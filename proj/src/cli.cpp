#include "natred/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "natred/algebra_json.hpp"
#include "natred/conjugate_locus.hpp"
#include "natred/errors.hpp"
#include "natred/jacobi.hpp"
#include "natred/locus_io.hpp"
#include "natred/m3_geometry.hpp"
#include "natred/osculating.hpp"
#include "natred/reductive_core.hpp"
#include "natred/verify.hpp"

namespace natred::cli {

using json = nlohmann::ordered_json;
using std::numbers::pi;

namespace {

json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  const double r = std::stod(format_number(v));
  return r == 0.0 ? 0.0 : r;
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json mat(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw DomainError("not a finite number: '" + text + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Vector parse_vector3(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3) throw DomainError("expected three comma separated numbers: '" + text + "'");
  Vector out(3);
  out << v[0], v[1], v[2];
  return out;
}

// Uniform grid on [lo, hi] with n points; n = 1 gives lo.
std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? lo : lo + (hi - lo) * (static_cast<double>(i) / (n - 1)));
  if (n > 1) g.back() = hi;
  return g;
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

struct Common {
  double kappa = 0.0;
  double tau = 1.0;
  std::string theta = "0";
  std::string phi = "0";
};

void add_params(CLI::App* app, Common& c) {
  app->add_option("--kappa", c.kappa, "base curvature kappa")->required();
  app->add_option("--tau", c.tau, "bundle curvature tau > 0")->required();
}

void add_theta(CLI::App* app, Common& c, bool required) {
  auto* opt = app->add_option("--theta", c.theta, "slope angle in [0, pi]; suffix 'pi' allowed");
  if (required) opt->required();
}

void add_phi(CLI::App* app, Common& c) { app->add_option("--phi", c.phi, "azimuth in [0, 2 pi); suffix 'pi' allowed"); }

std::string with_suffix(const std::string& path, const std::string& tag) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open output file '" + path + "'");
  return f;
}

json cmd_info(const Common& c) {
  const M3Params p(c.kappa, c.tau);
  const auto inv = scalar_invariants(p);
  const auto ext = bi_invariant_extension(build_algebra(p));
  json doc;
  doc["kappa"] = num(p.kappa());
  doc["tau"] = num(p.tau());
  doc["type"] = to_string(inv.type);
  doc["ricci"] = {num(inv.ricci[0]), num(inv.ricci[1]), num(inv.ricci[2])};
  doc["xi_sectional_curvature"] = num(inv.xi_sectional);
  doc["biinvariant_r"] = ext.r ? num(*ext.r) : json("none");
  if (inv.fiber_length) doc["fiber_length"] = num(*inv.fiber_length);
  doc["global_conjugate_radius"] = num(global_conjugate_radius(p));
  return doc;
}

json cmd_rank(const Common& c) {
  const M3Params p(c.kappa, c.tau);
  const Direction d(parse_angle(c.theta), parse_angle(c.phi));
  const auto curve = make_jacobi_curve(p, d);
  const int rank = osculating_rank(curve);
  const auto inv = theta_invariants(p, d.theta());
  json doc;
  doc["theta"] = num(d.theta());
  doc["phi"] = num(d.phi());
  doc["lambda"] = num(inv.lambda);
  doc["mu"] = num(inv.mu);
  doc["osculating_rank"] = rank;
  if (rank == 2) {
    const auto fit = fit_circle(curve, 64);
    doc["circle"] = {{"radius", num(fit.radius)}, {"period", num(fit.period)}, {"center", mat(fit.center.matrix())}};
  }
  return doc;
}

json cmd_conjugate(const Common& c, double t_max) {
  const M3Params p(c.kappa, c.tau);
  const Direction d(parse_angle(c.theta), parse_angle(c.phi));
  const auto inv = theta_invariants(p, d.theta());
  json pts = json::array();
  for (const auto& cp : conjugate_points(p, d, t_max)) {
    pts.push_back({{"t", num(cp.t)},
                   {"s", num(cp.s)},
                   {"kind", to_string(cp.kind)},
                   {"p", cp.p},
                   {"multiplicity", cp.multiplicity},
                   {"isotropic", cp.isotropic}});
  }
  json doc;
  doc["theta"] = num(d.theta());
  doc["phi"] = num(d.phi());
  doc["lambda"] = num(inv.lambda);
  doc["mu"] = num(inv.mu);
  doc["class"] = to_string(classify_geodesic(p, d.theta()));
  doc["t_max"] = num(t_max);
  doc["points"] = pts;
  return doc;
}

json cmd_radius(const Common& c, bool has_theta) {
  const M3Params p(c.kappa, c.tau);
  json doc;
  if (has_theta) {
    const Direction d(parse_angle(c.theta));
    doc["theta"] = num(d.theta());
    doc["conjugate_radius"] = num(conjugate_radius(p, d.theta()));
  } else {
    doc["global_conjugate_radius"] = num(global_conjugate_radius(p));
  }
  return doc;
}

json cmd_jacobi(const Common& c, const std::string& xprime0, const std::string& times) {
  const M3Params p(c.kappa, c.tau);
  const Direction d(parse_angle(c.theta), parse_angle(c.phi));
  const Vector x0 = parse_vector3(xprime0);
  const auto sol = solve_closed_form(p, d, x0);
  const auto iso = isotropy_test(p, d, x0);
  json samples = json::array();
  for (double t : parse_list(times)) samples.push_back({{"t", num(t)}, {"x", vec(evaluate(sol, t))}});
  json doc;
  doc["theta"] = num(d.theta());
  doc["phi"] = num(d.phi());
  doc["lambda"] = num(sol.lambda);
  doc["branch"] = to_string(sol.branch);
  doc["coefficients"] = {num(sol.coefficients[0]), num(sol.coefficients[1]), num(sol.coefficients[2])};
  doc["xprime0"] = vec(x0);
  doc["isotropic"] = iso.is_isotropic;
  doc["killing_coefficient"] = iso.killing_coefficient ? num(*iso.killing_coefficient) : json(nullptr);
  doc["samples"] = samples;
  return doc;
}

struct LocusOptions {
  std::string family = "S1";
  int p_min = 1;
  int p_max = 1;
  int theta_samples = 91;
  int phi_samples = 72;
  std::string theta_min = "0";
  std::string theta_max = "pi";
  std::string out;
  std::string format = "obj";
};

json cmd_locus(const Common& c, const LocusOptions& o) {
  const M3Params p(c.kappa, c.tau);
  LocusFamily family;
  if (o.family == "S1") {
    family = LocusFamily::S1;
  } else if (o.family == "S2") {
    family = LocusFamily::S2;
  } else {
    throw DomainError("family must be S1 or S2");
  }
  if (o.format != "obj" && o.format != "csv") throw DomainError("format must be obj or csv");
  if (o.theta_samples < 2 || o.phi_samples < 3) throw DomainError("need theta-samples >= 2 and phi-samples >= 3");
  if (o.p_min > o.p_max) throw DomainError("p-min must not exceed p-max");
  const double tmin = parse_angle(o.theta_min);
  const double tmax = parse_angle(o.theta_max);
  if (!(tmin >= 0.0 && tmax <= pi && tmin < tmax)) throw DomainError("need 0 <= theta-min < theta-max <= pi");

  // Contiguous runs of theta with lambda > 0; each run is one piece of the surface.
  std::vector<std::vector<double>> runs;
  bool open = false;
  for (double theta : grid(tmin, tmax, o.theta_samples)) {
    if (theta_invariants(p, theta).lambda > kLambdaZeroThreshold) {
      if (!open) runs.emplace_back();
      runs.back().push_back(theta);
      open = true;
    } else {
      open = false;
    }
  }
  if (runs.empty()) throw DomainError("no theta in the range has lambda > 0; the conjugate locus is empty there");
  std::vector<double> phis;
  for (int j = 0; j < o.phi_samples; ++j) phis.push_back(2 * pi * j / o.phi_samples);

  json files = json::array();
  for (int pidx = o.p_min; pidx <= o.p_max; ++pidx) {
    std::vector<LocusSurface> pieces;
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& run : runs) {
      pieces.push_back(sample_locus(p, family, pidx, run, phis));
      const auto& surf = pieces.back();
      for (std::size_t i = 0; i < surf.points.size(); ++i) {
        const double s2 = surf.s[i] * surf.s[i];
        for (const auto& v : surf.points[i]) {
          const double q =
              p.kappa() * (v.x() * v.x() + v.y() * v.y()) + p.tau() * p.tau() * v.z() * v.z();
          worst = std::max(worst, std::abs(q - s2) / s2);
          ++count;
        }
      }
    }
    const std::string path = o.p_min == o.p_max ? o.out : with_suffix(o.out, "_p" + std::to_string(pidx));
    auto f = open_out(path);
    if (o.format == "obj") {
      write_obj(pieces, f, true);
    } else {
      write_csv(pieces, f);
    }
    files.push_back({{"path", path},
                     {"family", o.family},
                     {"p", pidx},
                     {"pieces", pieces.size()},
                     {"samples", count},
                     {"max_quadric_residual", num(worst)}});
  }
  json doc;
  doc["format"] = o.format;
  doc["files"] = files;
  return doc;
}

json cmd_fcurve(const Common& c, double s_max, int samples, const std::string& out) {
  const M3Params p(c.kappa, c.tau);
  const double theta = Direction(parse_angle(c.theta)).theta();
  {
    auto f = open_out(out);
    write_fcurve_csv(p, theta, s_max, samples, f);
  }
  const auto inv = theta_invariants(p, theta);
  std::vector<double> zeros;
  for (int k = 1; 2 * k * pi <= s_max; ++k) zeros.push_back(2 * k * pi);
  if (inv.mu != 0.0) {
    for (int k = inv.mu < 0 ? 0 : 1;; ++k) {
      const double s = *branch_equation_root(inv.mu, k);
      if (s > s_max) break;
      zeros.push_back(s);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  json z = json::array();
  for (double s : zeros) z.push_back(num(s));
  json doc;
  doc["path"] = out;
  doc["theta"] = num(theta);
  doc["mu"] = num(inv.mu);
  doc["samples"] = samples;
  doc["zeros"] = z;
  return doc;
}

json cmd_check(const std::string& path, const std::string& directions) {
  const ReductiveAlgebra input = algebra_from_json_file(path);
  const bool orthonormal = input.is_orthonormal();
  const ReductiveAlgebra alg = orthonormal ? input : input.orthonormalized();
  const Matrix coords = orthonormal ? Matrix::Identity(alg.dim_m(), alg.dim_m()) : input.orthonormal_coordinates();
  const auto nr = check_naturally_reductive(alg);

  json doc;
  doc["dim_m"] = alg.dim_m();
  doc["dim_k"] = alg.dim_k();
  doc["jacobi_residual"] = num(input.jacobi_residual());
  doc["orthonormalized"] = !orthonormal;
  doc["naturally_reductive"] = nr.naturally_reductive;
  doc["max_violation"] = num(nr.max_violation);
  if (alg.dim_k() == 1) {
    const auto ext = bi_invariant_extension(alg);
    doc["biinvariant_r"] = ext.r ? num(*ext.r) : json("none");
    doc["biinvariant_indeterminate"] = ext.indeterminate;
  }

  std::vector<Vector> dirs;
  if (directions.empty()) {
    for (int i = 0; i < input.dim_m(); ++i) dirs.push_back(Vector::Unit(input.dim_m(), i));
  } else {
    std::stringstream ss(directions);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto v = parse_list(item);
      if (static_cast<int>(v.size()) != input.dim_m()) throw DomainError("direction has wrong dimension: " + item);
      dirs.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
  }
  json ranks = json::array();
  for (const auto& v : dirs) {
    Vector u = coords * v;
    const double n = u.norm();
    if (n == 0.0) throw DomainError("direction must be nonzero");
    u /= n;
    json entry = {{"direction", vec(v)}};
    if (nr.naturally_reductive) {
      entry["osculating_rank"] = osculating_rank(make_jacobi_curve(alg, u));
      entry["isotropic_dimension"] = isotropic_dimension(alg, u);
    } else {
      entry["osculating_rank"] = nullptr;
    }
    ranks.push_back(entry);
  }
  doc["directions"] = ranks;
  return doc;
}

}  // namespace

double parse_angle(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
    const std::string head = trim(text.substr(0, text.size() - 2));
    if (head.empty()) return pi;
    if (head == "-") return -pi;
    return parse_number(head) * pi;
  }
  return parse_number(text);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item)));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jacobi operators, Jacobi fields and conjugate loci of the spaces M^3(kappa, tau)", "natred"};
  app.require_subcommand(1);

  Common c;
  double t_max = 25.0;
  double s_max = 20.0;
  int samples = 1001;
  std::string xprime0 = "0,1,0";
  std::string times = "1";
  std::string out_path;
  std::string algebra_path;
  std::string directions;
  std::string level = "quick";
  LocusOptions lo;

  auto* info = app.add_subcommand("info", "type, Ricci eigenvalues, bi-invariant extension, fiber length");
  add_params(info, c);

  auto* rank = app.add_subcommand("rank", "Jacobi osculating rank and circle data");
  add_params(rank, c);
  add_theta(rank, c, true);
  add_phi(rank, c);

  auto* conj = app.add_subcommand("conjugate", "conjugate points along a geodesic");
  add_params(conj, c);
  add_theta(conj, c, true);
  add_phi(conj, c);
  conj->add_option("--t-max", t_max, "largest arc length");

  auto* radius = app.add_subcommand("radius", "conjugate radius (global without --theta)");
  add_params(radius, c);
  auto* radius_theta = radius->add_option("--theta", c.theta, "slope angle in [0, pi]");

  auto* jac = app.add_subcommand("jacobi", "closed-form Jacobi field with X(0) = 0");
  add_params(jac, c);
  add_theta(jac, c, true);
  add_phi(jac, c);
  jac->add_option("--xprime0", xprime0, "initial derivative 'a,b,c'");
  jac->add_option("--t", times, "comma separated arc lengths");

  auto* locus = app.add_subcommand("locus", "sample a tangent conjugate-locus surface");
  add_params(locus, c);
  locus->add_option("--family", lo.family, "S1 (isotropic) or S2 (branch)");
  locus->add_option("--p-min", lo.p_min, "first index p");
  locus->add_option("--p-max", lo.p_max, "last index p");
  locus->add_option("--theta-samples", lo.theta_samples, "theta grid size");
  locus->add_option("--phi-samples", lo.phi_samples, "phi grid size");
  locus->add_option("--theta-min", lo.theta_min, "theta range start");
  locus->add_option("--theta-max", lo.theta_max, "theta range end");
  locus->add_option("--out", lo.out, "output path")->required();
  locus->add_option("--format", lo.format, "obj or csv");

  auto* fcurve = app.add_subcommand("fcurve", "sample f_theta(s) to CSV");
  add_params(fcurve, c);
  add_theta(fcurve, c, true);
  fcurve->add_option("--s-max", s_max, "upper end of the s range");
  fcurve->add_option("--samples", samples, "number of samples");
  fcurve->add_option("--out", out_path, "output path")->required();

  auto* check = app.add_subcommand("check", "check an algebra given as JSON");
  check->add_option("--algebra", algebra_path, "algebra JSON file")->required();
  check->add_option("--directions", directions, "directions 'x,y,z;x,y,z' in the file's basis");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (info->parsed()) {
      emit(out, cmd_info(c));
    } else if (rank->parsed()) {
      emit(out, cmd_rank(c));
    } else if (conj->parsed()) {
      emit(out, cmd_conjugate(c, t_max));
    } else if (radius->parsed()) {
      emit(out, cmd_radius(c, radius_theta->count() > 0));
    } else if (jac->parsed()) {
      emit(out, cmd_jacobi(c, xprime0, times));
    } else if (locus->parsed()) {
      emit(out, cmd_locus(c, lo));
    } else if (fcurve->parsed()) {
      emit(out, cmd_fcurve(c, s_max, samples, out_path));
    } else if (check->parsed()) {
      emit(out, cmd_check(algebra_path, directions));
    } else if (verify->parsed()) {
      const auto results = run_acceptance(level == "full" ? VerifyLevel::Full : VerifyLevel::Quick);
      return print_results(results, out) ? kOk : kVerifyFailure;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kOk;
}

}  // namespace natred::cli
