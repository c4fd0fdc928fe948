#include "fgeo/planes.hpp"

#include <algorithm>
#include <stdexcept>

namespace fgeo {

TranslationPlane bruck_bose(const Geometry& geo, const Spread& spr) {
  if (!is_valid_spread(geo, spr.lines))
    throw std::invalid_argument("plane construction needs a valid spread");
  const int q = geo.q;
  const int n_vec = q * q * q * q;
  const int s = q * q + 1;

  TranslationPlane pl;
  pl.q = q;
  pl.lines.reserve(static_cast<size_t>(q) * q * s + 1);

  std::vector<int> coords(4);
  std::vector<uint8_t> visited(n_vec);
  std::vector<int> member(q * q);
  for (int j = 0; j < s; ++j) {
    const ProjLine& line = geo.lines[spr.lines[j]];
    // the 2-dimensional vector space behind the projective line
    std::vector<int> space;
    space.push_back(0);
    for (int pi = 0; pi <= q; ++pi) {
      const auto& pc = geo.points[line.points[pi]].coords;
      for (int lambda = 1; lambda < q; ++lambda) {
        int enc = 0;
        for (int i = 3; i >= 0; --i) enc = enc * q + (pc[i] * lambda) % q;
        space.push_back(enc);
      }
    }

    // cosets partition the affine vectors
    std::fill(visited.begin(), visited.end(), 0);
    for (int v = 0; v < n_vec; ++v) {
      if (visited[v]) continue;
      int vv = v;
      for (int i = 0; i < 4; ++i) {
        coords[i] = vv % q;
        vv /= q;
      }
      size_t m = 0;
      for (int w : space) {
        int ww = w;
        int enc = 0;
        int mult = 1;
        for (int i = 0; i < 4; ++i) {
          enc += ((coords[i] + ww % q) % q) * mult;
          ww /= q;
          mult *= q;
        }
        visited[enc] = 1;
        member[m++] = enc;
      }
      std::sort(member.begin(), member.end());
      std::vector<uint16_t> pts(member.begin(), member.end());
      pts.push_back(static_cast<uint16_t>(n_vec + j));
      pl.lines.push_back(std::move(pts));
    }
  }

  std::vector<uint16_t> infinity;
  for (int j = 0; j < s; ++j)
    infinity.push_back(static_cast<uint16_t>(n_vec + j));
  pl.lines.push_back(std::move(infinity));
  return pl;
}

bool is_projective_plane(const TranslationPlane& pl) {
  const size_t n = pl.lines.size();
  const size_t deg = static_cast<size_t>(pl.order()) + 1;
  if (n != static_cast<size_t>(pl.order()) * pl.order() + pl.order() + 1)
    return false;
  const size_t words = (n + 63) / 64;
  std::vector<uint64_t> through(n * words);  // lines through each point
  std::vector<size_t> degree(n);
  for (size_t li = 0; li < n; ++li) {
    if (pl.lines[li].size() != deg) return false;
    if (!std::is_sorted(pl.lines[li].begin(), pl.lines[li].end())) return false;
    for (size_t i = 1; i < deg; ++i)
      if (pl.lines[li][i] == pl.lines[li][i - 1]) return false;
    for (uint16_t p : pl.lines[li]) {
      if (p >= n) return false;
      through[p * words + li / 64] |= uint64_t{1} << (li % 64);
      ++degree[p];
    }
  }
  for (size_t p = 0; p < n; ++p)
    if (degree[p] != deg) return false;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      int common = 0;
      for (size_t w = 0; w < words; ++w)
        common +=
            __builtin_popcountll(through[a * words + w] & through[b * words + w]);
      if (common != 1) return false;
    }
  return true;
}

int p_rank(const TranslationPlane& pl, int p) {
  if (p < 2) throw std::invalid_argument("rank needs a prime modulus");
  const size_t n = pl.lines.size();
  std::vector<std::vector<uint8_t>> rows(n, std::vector<uint8_t>(n));
  for (size_t li = 0; li < n; ++li)
    for (uint16_t pt : pl.lines[li]) rows[li][pt] = 1;

  // modular inverses by Fermat
  std::vector<uint8_t> inv(p);
  for (int a = 1; a < p; ++a)
    for (int b = 1; b < p; ++b)
      if (a * b % p == 1) inv[a] = static_cast<uint8_t>(b);

  int rank = 0;
  size_t pivot_row = 0;
  for (size_t col = 0; col < n && pivot_row < n; ++col) {
    size_t sel = pivot_row;
    while (sel < n && rows[sel][col] == 0) ++sel;
    if (sel == n) continue;
    std::swap(rows[sel], rows[pivot_row]);
    uint8_t* prow = rows[pivot_row].data();
    const int scale = inv[prow[col]];
    if (scale != 1)
      for (size_t j = col; j < n; ++j)
        prow[j] = static_cast<uint8_t>(prow[j] * scale % p);
    for (size_t r = pivot_row + 1; r < n; ++r) {
      uint8_t* row = rows[r].data();
      const int f = row[col];
      if (f == 0) continue;
      const int neg = p - f;
      for (size_t j = col; j < n; ++j)
        row[j] = static_cast<uint8_t>((row[j] + neg * prow[j]) % p);
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

}  // namespace fgeo
