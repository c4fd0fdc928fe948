// Regular spread of PG(3,q) via field reduction from PG(1,q^2), its kernel
// homology (Bruck kernel), and the circle geometry: every regulus contained
// in the regular spread, with its opposite regulus stored in kernel-cycle
// order so that semitransversal orbits have stable indices.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fgeo/field.hpp"
#include "fgeo/projgeom.hpp"

namespace fgeo {

// A line spread: q^2+1 pairwise skew lines partitioning the points.
// Lines are always kept sorted ascending by line id (the canonical order).
struct Spread {
  int q = 0;
  std::vector<LineId> lines;
  bool operator==(const Spread&) const = default;
};

bool is_valid_spread(const Geometry& geo, const std::vector<LineId>& lines);

// The regulus determined by three pairwise skew lines, together with its
// opposite ruling; both sides sorted ascending.
struct Regulus {
  std::vector<LineId> lines;
  std::vector<LineId> opposite;
};

Regulus regulus_through(const Geometry& geo, LineId l1, LineId l2, LineId l3);

// A regulus contained in the regular spread.  `local` holds its member lines
// as sorted indices into the spread; `opposite` holds the opposite ruling in
// kernel-cycle order starting from the smallest line id, so positions
// j, j+k, j+2k, ... form the orbits of the k-th kernel power.
struct Circle {
  std::array<uint8_t, 8> local;    // sorted, q+1 entries used
  std::array<LineId, 8> opposite;  // kernel-cycle order, q+1 entries used
  PointMask mask;                  // the quadric: points covered by the circle
  uint64_t line_bits = 0;          // bitmask over local spread indices
};

struct SpreadContext {
  Geometry geo;
  QuadExtField K;
  QuadExtElement g;  // primitive element of GF(q^2)
  Mat4 phi;          // multiplication by g; projective order q+1
  Spread spread;     // the regular spread
  std::vector<int16_t> local_of_line;  // line id -> spread index, -1 outside
  std::vector<Circle> circles;         // sorted by local tuple
  std::vector<std::vector<uint16_t>> circles_with_line;  // per spread index
  std::vector<uint16_t> circle_of_triple;  // s^3 table, kNone when none

  explicit SpreadContext(int q_prime);

  int spread_size() const { return geo.q * geo.q + 1; }
  int circle_size() const { return geo.q + 1; }

  // Circle through three distinct spread members, by local index (any order).
  uint16_t circle_id(int a, int b, int c) const;

  // The `orbit`-th orbit (0-based, ordered by smallest contained line id) of
  // the k-th kernel power on the opposite regulus of a circle: (q+1)/k lines,
  // sorted ascending.  k must divide q+1.
  std::vector<LineId> semitransversal(uint16_t circle, int k, int orbit) const;
};

}  // namespace fgeo
