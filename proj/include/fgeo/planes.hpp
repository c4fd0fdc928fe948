#pragma once

#include <cstdint>
#include <vector>

#include "fgeo/spreadcore.hpp"

namespace fgeo {

// A projective translation plane of order q^2 presented by its point-line
// incidences.  Points 0 .. q^4-1 are the affine vectors of GF(q)^4 (base-q
// encoded); points q^4 .. q^4+q^2 are the directions, one per spread line in
// spread order.  Lines hold sorted point ids: first the q^2(q^2+1) affine
// cosets grouped by spread line, then the line at infinity.
struct TranslationPlane {
  int q = 0;
  std::vector<std::vector<uint16_t>> lines;

  int order() const { return q * q; }
  size_t n_points() const { return lines.size(); }
};

// Build the plane of a spread: affine lines are the cosets of each spread
// line's 2-dimensional vector space, extended by that line's direction
// point; the directions form the line at infinity.
TranslationPlane bruck_bose(const Geometry& geo, const Spread& spr);

// Full axiom check: correct counts, uniform line size q^2+1, uniform point
// degree q^2+1, and every point pair on exactly one common line.
bool is_projective_plane(const TranslationPlane& pl);

// Rank of the 0/1 point-line incidence matrix over GF(p).
int p_rank(const TranslationPlane& pl, int p);

}  // namespace fgeo
