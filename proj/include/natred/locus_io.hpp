#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "natred/conjugate_locus.hpp"

namespace natred {

/// Formats a double with 15 significant digits ("%.15g").
std::string format_number(double v);

/// Wavefront OBJ: one "v x y z" line per distinct vertex, then 1-based "f i j k"
/// triangles, two per grid quad. Rows at theta = 0 or pi collapse to a single
/// vertex so the adjacent quads become a fan. With wrap_phi the last phi column
/// is joined to the first.
void write_obj(const LocusSurface& surface, std::ostream& out, bool wrap_phi);
/// Several disconnected pieces of one surface in a single file.
void write_obj(const std::vector<LocusSurface>& pieces, std::ostream& out, bool wrap_phi);

/// CSV with header "theta,phi,x,y,z,s", one row per sample.
void write_csv(const LocusSurface& surface, std::ostream& out);
void write_csv(const std::vector<LocusSurface>& pieces, std::ostream& out);

/// CSV with header "s,f_theta_s" over samples points uniformly spaced on [0, s_max].
void write_fcurve_csv(const M3Params& params, double theta, double s_max, int samples, std::ostream& out);

}  // namespace natred
