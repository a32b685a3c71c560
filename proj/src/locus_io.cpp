#include "natred/locus_io.hpp"

#include <cstdio>
#include <numbers>
#include <ostream>

#include "natred/errors.hpp"

namespace natred {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::size_t append_obj(const LocusSurface& surface, std::ostream& out, bool wrap_phi, std::size_t next) {
  const std::size_t rows = surface.points.size();
  const std::size_t cols = surface.phi.size();
  std::vector<std::vector<std::size_t>> index(rows, std::vector<std::size_t>(cols));
  auto emit = [&](const Eigen::Vector3d& v) {
    out << "v " << format_number(v.x()) << ' ' << format_number(v.y()) << ' ' << format_number(v.z()) << '\n';
    return next++;
  };
  for (std::size_t i = 0; i < rows; ++i) {
    const double theta = surface.theta[i];
    if (theta == 0.0 || theta == std::numbers::pi) {
      const std::size_t pole = emit(surface.points[i][0]);
      for (std::size_t j = 0; j < cols; ++j) index[i][j] = pole;
    } else {
      for (std::size_t j = 0; j < cols; ++j) index[i][j] = emit(surface.points[i][j]);
    }
  }
  auto face = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (a == b || b == c || a == c) return;
    out << "f " << a << ' ' << b << ' ' << c << '\n';
  };
  const std::size_t spans = wrap_phi && cols > 2 ? cols : (cols > 0 ? cols - 1 : 0);
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (std::size_t j = 0; j < spans; ++j) {
      const std::size_t jn = (j + 1) % cols;
      const std::size_t a = index[i][j], b = index[i][jn], c = index[i + 1][jn], d = index[i + 1][j];
      face(a, b, c);
      face(a, c, d);
    }
  }
  return next;
}

void append_csv(const LocusSurface& surface, std::ostream& out) {
  for (std::size_t i = 0; i < surface.points.size(); ++i) {
    for (std::size_t j = 0; j < surface.phi.size(); ++j) {
      const auto& v = surface.points[i][j];
      out << format_number(surface.theta[i]) << ',' << format_number(surface.phi[j]) << ',' << format_number(v.x())
          << ',' << format_number(v.y()) << ',' << format_number(v.z()) << ',' << format_number(surface.s[i]) << '\n';
    }
  }
}

}  // namespace

void write_obj(const LocusSurface& surface, std::ostream& out, bool wrap_phi) { append_obj(surface, out, wrap_phi, 1); }

void write_obj(const std::vector<LocusSurface>& pieces, std::ostream& out, bool wrap_phi) {
  std::size_t next = 1;
  for (const auto& piece : pieces) next = append_obj(piece, out, wrap_phi, next);
}

void write_csv(const LocusSurface& surface, std::ostream& out) {
  out << "theta,phi,x,y,z,s\n";
  append_csv(surface, out);
}

void write_csv(const std::vector<LocusSurface>& pieces, std::ostream& out) {
  out << "theta,phi,x,y,z,s\n";
  for (const auto& piece : pieces) append_csv(piece, out);
}

void write_fcurve_csv(const M3Params& params, double theta, double s_max, int samples, std::ostream& out) {
  if (!(s_max > 0.0)) throw DomainError("s_max must be positive");
  if (samples < 2) throw DomainError("need at least 2 samples");
  out << "s,f_theta_s\n";
  for (int k = 0; k < samples; ++k) {
    const double s = s_max * k / (samples - 1);
    out << format_number(s) << ',' << format_number(f_theta(params, theta, s)) << '\n';
  }
}

}  // namespace natred
