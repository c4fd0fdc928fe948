#include "fgeo/spreadcore.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fgeo {

bool is_valid_spread(const Geometry& geo, const std::vector<LineId>& lines) {
  if (static_cast<int>(lines.size()) != geo.q * geo.q + 1) return false;
  PointMask covered{};
  for (LineId l : lines) {
    if (l >= geo.lines.size()) return false;
    const PointMask& m = geo.lines[l].mask;
    for (int w = 0; w < kMaskWords; ++w) {
      if (covered[w] & m[w]) return false;  // repeated line or a meet
      covered[w] |= m[w];
    }
  }
  int total = 0;
  for (int w = 0; w < kMaskWords; ++w) total += __builtin_popcountll(covered[w]);
  return total == geo.n_points;
}

Regulus regulus_through(const Geometry& geo, LineId l1, LineId l2, LineId l3) {
  if (!geo.lines_skew(l1, l2) || !geo.lines_skew(l1, l3) ||
      !geo.lines_skew(l2, l3))
    throw std::invalid_argument("regulus requires three pairwise skew lines");
  Regulus r;
  for (int j = 0; j <= geo.q; ++j)
    r.opposite.push_back(
        geo.transversal_through(geo.lines[l1].points[j], l2, l3));
  for (int j = 0; j <= geo.q; ++j)
    r.lines.push_back(geo.transversal_through(geo.lines[r.opposite[0]].points[j],
                                              r.opposite[1], r.opposite[2]));
  std::sort(r.lines.begin(), r.lines.end());
  std::sort(r.opposite.begin(), r.opposite.end());
  return r;
}

SpreadContext::SpreadContext(int q_prime)
    : geo(q_prime), K(q_prime), g(K.primitive_element()) {
  const int q = geo.q;
  const int s = spread_size();

  // kernel homology: multiply both GF(q^2) coordinates by g
  {
    int ga = g.a, gb = g.b, n = K.n;
    phi = Mat4{};
    for (int blk = 0; blk < 2; ++blk) {
      int o = 2 * blk;
      phi.at(o, o) = static_cast<uint8_t>(ga);
      phi.at(o, o + 1) = static_cast<uint8_t>(gb);
      phi.at(o + 1, o) = static_cast<uint8_t>(K.fp.mul(n, gb));
      phi.at(o + 1, o + 1) = static_cast<uint8_t>(ga);
    }
  }

  // regular spread by field reduction: one line per point of PG(1,q^2)
  std::vector<LineId> sl;
  auto spread_line = [&](QuadExtElement a, QuadExtElement b) {
    QuadExtElement wa = K.mul(K.omega(), a), wb = K.mul(K.omega(), b);
    uint8_t rows[8] = {a.a, a.b, b.a, b.b, wa.a, wa.b, wb.a, wb.b};
    return geo.line_from_basis(rows);
  };
  sl.push_back(spread_line(K.zero(), K.one()));
  for (int t = 0; t < q * q; ++t)
    sl.push_back(spread_line(K.one(), K.element(t)));
  std::sort(sl.begin(), sl.end());
  spread = Spread{q, sl};
  if (!is_valid_spread(geo, spread.lines))
    throw std::logic_error("regular spread construction failed");

  local_of_line.assign(geo.n_lines, -1);
  for (int i = 0; i < s; ++i) local_of_line[spread.lines[i]] = static_cast<int16_t>(i);

  // circles: reguli through spread-line triples, deduped on the local tuple
  std::map<std::array<uint8_t, 8>, std::vector<LineId>> found;
  for (int a = 0; a < s; ++a)
    for (int b = a + 1; b < s; ++b)
      for (int c = b + 1; c < s; ++c) {
        Regulus r =
            regulus_through(geo, spread.lines[a], spread.lines[b], spread.lines[c]);
        std::array<uint8_t, 8> local;
        local.fill(0);
        bool contained = true;
        for (int j = 0; j <= q; ++j) {
          int16_t idx = local_of_line[r.lines[j]];
          if (idx < 0) {
            contained = false;
            break;
          }
          local[j] = static_cast<uint8_t>(idx);
        }
        if (!contained)
          throw std::logic_error("regular spread triple outside any circle");
        found.emplace(local, r.opposite);
      }

  circles.reserve(found.size());
  for (auto& [local, opp] : found) {
    Circle c;
    c.local = local;
    c.mask.fill(0);
    c.line_bits = 0;
    for (int j = 0; j <= q; ++j) {
      const PointMask& m = geo.lines[spread.lines[local[j]]].mask;
      for (int w = 0; w < kMaskWords; ++w) c.mask[w] |= m[w];
      c.line_bits |= uint64_t{1} << local[j];
    }
    // opposite ruling rewritten in kernel-cycle order from the smallest id
    c.opposite.fill(kNone);
    LineId cur = *std::min_element(opp.begin(), opp.end());
    for (int j = 0; j <= q; ++j) {
      c.opposite[j] = cur;
      cur = geo.map_line(cur, phi);
    }
    if (cur != c.opposite[0] ||
        !std::is_permutation(opp.begin(), opp.end(), c.opposite.begin(),
                             c.opposite.begin() + q + 1))
      throw std::logic_error("opposite regulus is not a single kernel cycle");
    circles.push_back(c);
  }

  circles_with_line.assign(s, {});
  circle_of_triple.assign(static_cast<size_t>(s) * s * s, kNone);
  for (uint16_t id = 0; id < circles.size(); ++id) {
    const Circle& c = circles[id];
    for (int j = 0; j <= q; ++j) circles_with_line[c.local[j]].push_back(id);
    for (int x = 0; x <= q; ++x)
      for (int y = x + 1; y <= q; ++y)
        for (int z = y + 1; z <= q; ++z) {
          size_t key = (static_cast<size_t>(c.local[x]) * s + c.local[y]) * s +
                       c.local[z];
          circle_of_triple[key] = id;
        }
  }
}

uint16_t SpreadContext::circle_id(int a, int b, int c) const {
  if (a == b || a == c || b == c)
    throw std::invalid_argument("circle_id needs three distinct spread members");
  int x = std::min({a, b, c}), z = std::max({a, b, c});
  int y = a + b + c - x - z;
  const int s = spread_size();
  return circle_of_triple[(static_cast<size_t>(x) * s + y) * s + z];
}

std::vector<LineId> SpreadContext::semitransversal(uint16_t circle, int k,
                                                   int orbit) const {
  const int q = geo.q;
  if (k <= 0 || (q + 1) % k != 0)
    throw std::invalid_argument("semitransversal order must divide q+1");
  if (orbit < 0 || orbit >= k) throw std::invalid_argument("orbit out of range");
  const Circle& c = circles[circle];
  std::vector<std::vector<LineId>> orbits(k);
  for (int j = 0; j <= q; ++j) orbits[j % k].push_back(c.opposite[j]);
  for (auto& o : orbits) std::sort(o.begin(), o.end());
  std::sort(orbits.begin(), orbits.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return orbits[orbit];
}

}  // namespace fgeo
