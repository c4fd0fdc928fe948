#include "fgeo/projgeom.hpp"

#include <algorithm>
#include <stdexcept>

namespace fgeo {

namespace {

// Right-nullspace basis of an r x 4 matrix over GF(q); rows are consumed.
// Returns the number of basis vectors written to out (each a 4-vector).
int nullspace(const PrimeField& F, uint8_t* rows, int r,
              std::array<uint8_t, 4>* out) {
  int pivot_col_of_row[3] = {-1, -1, -1};
  bool col_is_pivot[4] = {false, false, false, false};
  int rank = 0;
  for (int c = 0; c < 4 && rank < r; ++c) {
    int pr = -1;
    for (int i = rank; i < r; ++i)
      if (rows[4 * i + c]) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    for (int c2 = 0; c2 < 4; ++c2)
      std::swap(rows[4 * rank + c2], rows[4 * pr + c2]);
    int s = F.inv(rows[4 * rank + c]);
    for (int c2 = 0; c2 < 4; ++c2)
      rows[4 * rank + c2] = F.mul(s, rows[4 * rank + c2]);
    for (int i = 0; i < r; ++i) {
      if (i == rank || !rows[4 * i + c]) continue;
      int f = rows[4 * i + c];
      for (int c2 = 0; c2 < 4; ++c2)
        rows[4 * i + c2] = F.sub(rows[4 * i + c2], F.mul(f, rows[4 * rank + c2]));
    }
    pivot_col_of_row[rank] = c;
    col_is_pivot[c] = true;
    ++rank;
  }
  int count = 0;
  for (int c = 0; c < 4; ++c) {
    if (col_is_pivot[c]) continue;
    std::array<uint8_t, 4> v{};
    v[c] = 1;
    for (int i = 0; i < rank; ++i)
      v[pivot_col_of_row[i]] = F.neg(rows[4 * i + c]);
    out[count++] = v;
  }
  return count;
}

}  // namespace

Geometry::Geometry(int q_prime) : F(q_prime), q(q_prime) {
  int q2 = q * q, q4 = q2 * q2;
  n_points = (q4 - 1) / (q - 1);
  n_lines = (q2 + 1) * (q2 + q + 1);

  // points in lexicographic order of normalized coordinate vectors
  points.reserve(n_points);
  point_of_vec.assign(q4, kNone);
  std::array<uint8_t, 4> v{};
  for (int e = 1; e < q4; ++e) {
    int x = e;
    for (int i = 3; i >= 0; --i) {
      v[i] = static_cast<uint8_t>(x % q);
      x /= q;
    }
    int lead = 0;
    while (v[lead] == 0) ++lead;
    if (v[lead] != 1) continue;
    points.push_back({v});
  }
  for (int id = 0; id < n_points; ++id)
    for (int s = 1; s < q; ++s) {
      std::array<uint8_t, 4> w;
      for (int i = 0; i < 4; ++i) w[i] = static_cast<uint8_t>(F.mul(s, points[id].coords[i]));
      point_of_vec[encode_vec(w)] = static_cast<uint16_t>(id);
    }

  // lines: span all point pairs, dedupe on the reduced basis, then order by
  // sorted point tuple
  int64_t q8 = static_cast<int64_t>(q4) * q4;
  line_of_rref.assign(q8, -1);
  std::vector<ProjLine> raw;
  raw.reserve(n_lines);
  auto rref_code = [&](const uint8_t rows[8]) {
    int64_t code = 0;
    for (int i = 0; i < 8; ++i) code = code * q + rows[i];
    return code;
  };
  for (int p1 = 0; p1 < n_points; ++p1)
    for (int p2 = p1 + 1; p2 < n_points; ++p2) {
      uint8_t rows[8];
      for (int i = 0; i < 4; ++i) {
        rows[i] = points[p1].coords[i];
        rows[4 + i] = points[p2].coords[i];
      }
      rref2(rows);
      int64_t code = rref_code(rows);
      if (line_of_rref[code] >= 0) continue;
      line_of_rref[code] = 0;  // placeholder until ids are assigned
      ProjLine ln;
      std::copy(rows, rows + 8, ln.basis.begin());
      ln.points.fill(kNone);
      ln.mask.fill(0);
      // q+1 points: row1 and row0 + t*row1
      std::array<uint8_t, 4> w;
      for (int i = 0; i < 4; ++i) w[i] = rows[4 + i];
      ln.points[0] = point_of_vec[encode_vec(w)];
      for (int t = 0; t < q; ++t) {
        for (int i = 0; i < 4; ++i) w[i] = static_cast<uint8_t>(F.add(rows[i], F.mul(t, rows[4 + i])));
        ln.points[1 + t] = point_of_vec[encode_vec(w)];
      }
      std::sort(ln.points.begin(), ln.points.begin() + q + 1);
      raw.push_back(ln);
    }
  std::sort(raw.begin(), raw.end(), [](const ProjLine& a, const ProjLine& b) {
    return a.points < b.points;
  });
  lines = std::move(raw);
  for (int id = 0; id < static_cast<int>(lines.size()); ++id) {
    ProjLine& ln = lines[id];
    for (int j = 0; j <= q; ++j) {
      uint16_t p = ln.points[j];
      ln.mask[p >> 6] |= uint64_t{1} << (p & 63);
    }
    line_of_rref[rref_code(ln.basis.data())] = id;
  }

  lines_through.assign(n_points, {});
  for (int id = 0; id < static_cast<int>(lines.size()); ++id)
    for (int j = 0; j <= q; ++j) lines_through[lines[id].points[j]].push_back(static_cast<uint16_t>(id));
}

PointId Geometry::point_id(const std::array<uint8_t, 4>& v) const {
  uint32_t e = encode_vec(v);
  if (e == 0) throw std::invalid_argument("zero vector has no projective point");
  return point_of_vec[e];
}

void Geometry::rref2(uint8_t rows[8]) const {
  int c0 = 0;
  while (c0 < 4 && rows[c0] == 0 && rows[4 + c0] == 0) ++c0;
  if (c0 == 4) throw std::invalid_argument("rank-deficient basis");
  if (rows[c0] == 0)
    for (int i = 0; i < 4; ++i) std::swap(rows[i], rows[4 + i]);
  int s = F.inv(rows[c0]);
  for (int i = 0; i < 4; ++i) rows[i] = static_cast<uint8_t>(F.mul(s, rows[i]));
  if (rows[4 + c0]) {
    int f = rows[4 + c0];
    for (int i = 0; i < 4; ++i) rows[4 + i] = static_cast<uint8_t>(F.sub(rows[4 + i], F.mul(f, rows[i])));
  }
  int c1 = c0 + 1;
  while (c1 < 4 && rows[4 + c1] == 0) ++c1;
  if (c1 == 4) throw std::invalid_argument("rank-deficient basis");
  s = F.inv(rows[4 + c1]);
  for (int i = 0; i < 4; ++i) rows[4 + i] = static_cast<uint8_t>(F.mul(s, rows[4 + i]));
  if (rows[c1]) {
    int f = rows[c1];
    for (int i = 0; i < 4; ++i) rows[i] = static_cast<uint8_t>(F.sub(rows[i], F.mul(f, rows[4 + i])));
  }
}

LineId Geometry::line_from_basis(const uint8_t rows[8]) const {
  uint8_t r[8];
  std::copy(rows, rows + 8, r);
  rref2(r);
  int64_t code = 0;
  for (int i = 0; i < 8; ++i) code = code * q + r[i];
  int32_t id = line_of_rref[code];
  if (id < 0) throw std::logic_error("basis does not name a known line");
  return static_cast<LineId>(id);
}

LineId Geometry::line_span(PointId p1, PointId p2) const {
  if (p1 == p2) throw std::invalid_argument("degenerate span of equal points");
  uint8_t rows[8];
  for (int i = 0; i < 4; ++i) {
    rows[i] = points[p1].coords[i];
    rows[4 + i] = points[p2].coords[i];
  }
  return line_from_basis(rows);
}

PointId Geometry::line_meet(LineId l1, LineId l2) const {
  if (l1 == l2) throw std::invalid_argument("line_meet of identical lines");
  const PointMask& a = lines[l1].mask;
  const PointMask& b = lines[l2].mask;
  for (int w = 0; w < kMaskWords; ++w) {
    uint64_t x = a[w] & b[w];
    if (x) return static_cast<PointId>(64 * w + __builtin_ctzll(x));
  }
  return kNone;
}

LineId Geometry::transversal_through(PointId p, LineId l2, LineId l3) const {
  if (point_on_line(p, l2) || point_on_line(p, l3))
    throw std::invalid_argument("transversal point lies on a target line");
  if (!lines_skew(l2, l3))
    throw std::invalid_argument("transversal targets must be skew");
  std::array<uint8_t, 4> normal[2];
  for (int which = 0; which < 2; ++which) {
    const ProjLine& l = lines[which == 0 ? l2 : l3];
    uint8_t rows[12];
    for (int i = 0; i < 4; ++i) rows[i] = points[p].coords[i];
    std::copy(l.basis.begin(), l.basis.end(), rows + 4);
    std::array<uint8_t, 4> out[4];
    int d = nullspace(F, rows, 3, out);
    if (d != 1) throw std::logic_error("plane through point and line is not a hyperplane");
    normal[which] = out[0];
  }
  uint8_t rows[8];
  for (int i = 0; i < 4; ++i) {
    rows[i] = normal[0][i];
    rows[4 + i] = normal[1][i];
  }
  std::array<uint8_t, 4> out[4];
  int d = nullspace(F, rows, 2, out);
  if (d != 2) throw std::logic_error("plane meet is not a line");
  uint8_t basis[8];
  for (int i = 0; i < 4; ++i) {
    basis[i] = out[0][i];
    basis[4 + i] = out[1][i];
  }
  return line_from_basis(basis);
}

std::array<uint8_t, 4> Geometry::map_vec(const std::array<uint8_t, 4>& v,
                                         const Mat4& a) const {
  std::array<uint8_t, 4> out{};
  for (int c = 0; c < 4; ++c) {
    int s = 0;
    for (int r = 0; r < 4; ++r) s += v[r] * a.at(r, c);
    out[c] = static_cast<uint8_t>(s % q);
  }
  return out;
}

PointId Geometry::map_point(PointId p, const Mat4& a) const {
  return point_of_vec[encode_vec(map_vec(points[p].coords, a))];
}

LineId Geometry::map_line(LineId l, const Mat4& a) const {
  const ProjLine& ln = lines[l];
  std::array<uint8_t, 4> r0, r1;
  std::copy(ln.basis.begin(), ln.basis.begin() + 4, r0.begin());
  std::copy(ln.basis.begin() + 4, ln.basis.end(), r1.begin());
  r0 = map_vec(r0, a);
  r1 = map_vec(r1, a);
  uint8_t rows[8];
  for (int i = 0; i < 4; ++i) {
    rows[i] = r0[i];
    rows[4 + i] = r1[i];
  }
  return line_from_basis(rows);
}

Mat4 Geometry::mat_mul(const Mat4& a, const Mat4& b) const {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      int s = 0;
      for (int k = 0; k < 4; ++k) s += a.at(r, k) * b.at(k, c);
      out.at(r, c) = static_cast<uint8_t>(s % q);
    }
  return out;
}

Mat4 Geometry::mat_inverse(const Mat4& a) const {
  uint8_t aug[4][8];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      aug[r][c] = a.at(r, c);
      aug[r][4 + c] = (r == c) ? 1 : 0;
    }
  for (int c = 0; c < 4; ++c) {
    int pr = -1;
    for (int r = c; r < 4; ++r)
      if (aug[r][c]) {
        pr = r;
        break;
      }
    if (pr < 0) throw std::logic_error("matrix is singular");
    for (int j = 0; j < 8; ++j) std::swap(aug[c][j], aug[pr][j]);
    int s = F.inv(aug[c][c]);
    for (int j = 0; j < 8; ++j) aug[c][j] = static_cast<uint8_t>(F.mul(s, aug[c][j]));
    for (int r = 0; r < 4; ++r) {
      if (r == c || !aug[r][c]) continue;
      int f = aug[r][c];
      for (int j = 0; j < 8; ++j) aug[r][j] = static_cast<uint8_t>(F.sub(aug[r][j], F.mul(f, aug[c][j])));
    }
  }
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.at(r, c) = aug[r][4 + c];
  return out;
}

Mat4 Geometry::mat_normalize(const Mat4& a) const {
  for (int i = 0; i < 16; ++i)
    if (a.m[i]) {
      int s = F.inv(a.m[i]);
      Mat4 out;
      for (int j = 0; j < 16; ++j) out.m[j] = static_cast<uint8_t>(F.mul(s, a.m[j]));
      return out;
    }
  throw std::logic_error("zero matrix cannot be normalized");
}

Mat4 Geometry::identity_mat() const {
  Mat4 out;
  for (int i = 0; i < 4; ++i) out.at(i, i) = 1;
  return out;
}

}  // namespace fgeo
