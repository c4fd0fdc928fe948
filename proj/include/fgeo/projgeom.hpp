// PG(3,q): canonical point and line tables, incidence, meets, transversals.
//
// Points are normalized 4-vectors (leftmost nonzero coordinate 1), indexed by
// lexicographic rank. Lines carry a reduced 2x4 basis, the sorted list of
// their q+1 point indices, and a point bitmask; line ids are assigned in
// lexicographic order of the sorted point tuples, which is the canonical line
// key used by every file format.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fgeo/field.hpp"

namespace fgeo {

using PointId = uint16_t;
using LineId = uint16_t;
inline constexpr uint16_t kNone = 0xffff;

struct ProjPoint {
  std::array<uint8_t, 4> coords;  // leftmost nonzero coordinate is 1
};

inline constexpr int kMaskWords = 7;  // covers up to 400 points (q=7)
using PointMask = std::array<uint64_t, kMaskWords>;

inline bool masks_disjoint(const PointMask& a, const PointMask& b) {
  uint64_t acc = 0;
  for (int w = 0; w < kMaskWords; ++w) acc |= a[w] & b[w];
  return acc == 0;
}

struct ProjLine {
  std::array<uint8_t, 8> basis;    // two reduced rows, concatenated
  std::array<uint16_t, 8> points;  // sorted point ids, first q+1 entries used
  PointMask mask;
};

// Invertible 4x4 matrix over GF(q), row-vector convention: image of v is v*M.
struct Mat4 {
  std::array<uint8_t, 16> m{};
  uint8_t& at(int r, int c) { return m[4 * r + c]; }
  uint8_t at(int r, int c) const { return m[4 * r + c]; }
  bool operator==(const Mat4&) const = default;
};

struct Geometry {
  PrimeField F;
  int q;
  int n_points;  // (q^4-1)/(q-1)
  int n_lines;   // (q^2+1)(q^2+q+1)

  std::vector<ProjPoint> points;
  std::vector<uint16_t> point_of_vec;  // encoded nonzero vector -> PointId
  std::vector<ProjLine> lines;
  std::vector<int32_t> line_of_rref;   // encoded reduced basis -> LineId
  std::vector<std::vector<uint16_t>> lines_through;  // per point, sorted

  explicit Geometry(int q_prime);

  uint32_t encode_vec(const std::array<uint8_t, 4>& v) const {
    return ((v[0] * q + v[1]) * q + v[2]) * q + v[3];
  }
  PointId point_id(const std::array<uint8_t, 4>& v) const;

  bool point_on_line(PointId p, LineId l) const {
    return (lines[l].mask[p >> 6] >> (p & 63)) & 1;
  }
  bool lines_skew(LineId a, LineId b) const {
    return masks_disjoint(lines[a].mask, lines[b].mask);
  }

  LineId line_span(PointId p1, PointId p2) const;
  // Unique common point, or kNone when skew; identical lines are an error.
  PointId line_meet(LineId l1, LineId l2) const;
  // Unique line through P meeting both l2 and l3 (which must be skew, with P
  // on neither): the meet of the planes span(P,l2) and span(P,l3).
  LineId transversal_through(PointId p, LineId l2, LineId l3) const;

  // Reduce a 2x4 row pair in place to the canonical basis; rows must be
  // independent.
  void rref2(uint8_t rows[8]) const;
  LineId line_from_basis(const uint8_t rows[8]) const;

  std::array<uint8_t, 4> map_vec(const std::array<uint8_t, 4>& v,
                                 const Mat4& a) const;
  PointId map_point(PointId p, const Mat4& a) const;
  LineId map_line(LineId l, const Mat4& a) const;

  Mat4 mat_mul(const Mat4& a, const Mat4& b) const;  // apply a, then b
  Mat4 mat_inverse(const Mat4& a) const;
  // Scale so the first nonzero entry (row-major) is 1; the canonical
  // representative of a projective matrix.
  Mat4 mat_normalize(const Mat4& a) const;
  Mat4 identity_mat() const;
};

}  // namespace fgeo
