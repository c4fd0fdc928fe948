#include "fgeo/webs.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace fgeo {

namespace {

// 2x2 matrix over GF(q^2), row-vector convention
struct Mat2Ext {
  QuadExtElement a, b, c, d;  // [[a,b],[c,d]]
};

std::string set_key(const std::vector<uint16_t>& v) {
  return std::string(reinterpret_cast<const char*>(v.data()),
                     v.size() * sizeof(uint16_t));
}

}  // namespace

SpreadStabilizerGroup::SpreadStabilizerGroup(const SpreadContext& context)
    : ctx(&context) {
  const QuadExtField& K = ctx->K;
  const Geometry& geo = ctx->geo;
  const int q2 = K.order();
  const int s = ctx->spread_size();

  // spread index of each PG(1,q^2) point: index 0 is (0,1), 1+t is (1,t)
  std::vector<uint8_t> local_of_pg(s);
  {
    auto line_of = [&](QuadExtElement a, QuadExtElement b) {
      QuadExtElement wa = K.mul(K.omega(), a), wb = K.mul(K.omega(), b);
      uint8_t rows[8] = {a.a, a.b, b.a, b.b, wa.a, wa.b, wb.a, wb.b};
      return geo.line_from_basis(rows);
    };
    local_of_pg[0] =
        static_cast<uint8_t>(ctx->local_of_line[line_of(K.zero(), K.one())]);
    for (int t = 0; t < q2; ++t)
      local_of_pg[1 + t] = static_cast<uint8_t>(
          ctx->local_of_line[line_of(K.one(), K.element(t))]);
  }
  std::vector<uint8_t> pg_of_local(s);
  for (int p = 0; p < s; ++p) pg_of_local[local_of_pg[p]] = static_cast<uint8_t>(p);

  // Frobenius on PG(1,q^2) points
  std::vector<uint8_t> frob_pg(s);
  frob_pg[0] = 0;
  for (int t = 0; t < q2; ++t)
    frob_pg[1 + t] =
        static_cast<uint8_t>(1 + K.index_of(K.frobenius(K.element(t))));

  // multiplication-by-x 2x2 block over GF(q)
  auto block = [&](QuadExtElement x) {
    std::array<uint8_t, 4> m;
    m[0] = x.a;
    m[1] = x.b;
    m[2] = static_cast<uint8_t>(K.fp.mul(K.n, x.b));
    m[3] = x.a;
    return m;
  };
  auto lift4 = [&](const Mat2Ext& m) {
    Mat4 out;
    const QuadExtElement* cells[4] = {&m.a, &m.b, &m.c, &m.d};
    for (int br = 0; br < 2; ++br)
      for (int bc = 0; bc < 2; ++bc) {
        auto blk = block(*cells[2 * br + bc]);
        out.at(2 * br, 2 * bc) = blk[0];
        out.at(2 * br, 2 * bc + 1) = blk[1];
        out.at(2 * br + 1, 2 * bc) = blk[2];
        out.at(2 * br + 1, 2 * bc + 1) = blk[3];
      }
    return out;
  };
  Mat4 frob4{};  // coordinate conjugation (a,b) -> (a,-b), GF(q)-linear
  frob4.at(0, 0) = 1;
  frob4.at(1, 1) = static_cast<uint8_t>(K.fp.neg(1));
  frob4.at(2, 2) = 1;
  frob4.at(3, 3) = frob4.at(1, 1);

  // image of PG(1,q^2) point index under [[a,b],[c,d]]: (s,t) -> (sa+tc, sb+td)
  auto act_pg = [&](const Mat2Ext& m, int p) {
    QuadExtElement s0 = (p == 0) ? K.zero() : K.one();
    QuadExtElement t0 = (p == 0) ? K.one() : K.element(p - 1);
    QuadExtElement si = K.add(K.mul(s0, m.a), K.mul(t0, m.c));
    QuadExtElement ti = K.add(K.mul(s0, m.b), K.mul(t0, m.d));
    if (K.is_zero(si)) return 0;
    return 1 + K.index_of(K.mul(ti, K.inv(si)));
  };

  elements.reserve(2u * q2 * (q2 * q2 - 1));
  for (int ia = 0; ia < q2; ++ia)
    for (int ib = 0; ib < q2; ++ib)
      for (int ic = 0; ic < q2; ++ic)
        for (int id = 0; id < q2; ++id) {
          // normalized representative: first nonzero cell is 1
          int first = ia ? ia : ib ? ib : ic ? ic : id;
          if (first != K.index_of(K.one())) continue;
          Mat2Ext m{K.element(ia), K.element(ib), K.element(ic), K.element(id)};
          QuadExtElement det =
              K.sub(K.mul(m.a, m.d), K.mul(m.b, m.c));
          if (K.is_zero(det)) continue;
          std::array<uint8_t, 50> pg_img{};
          for (int p = 0; p < s; ++p)
            pg_img[p] = static_cast<uint8_t>(act_pg(m, p));
          Mat4 linear = lift4(m);
          for (int use_frob = 0; use_frob < 2; ++use_frob) {
            GroupElement e;
            for (int i = 0; i < s; ++i) {
              int p = pg_of_local[i];
              int img = use_frob ? pg_img[frob_pg[p]] : pg_img[p];
              e.perm[i] = local_of_pg[img];
            }
            e.rep = use_frob ? geo.mat_mul(frob4, linear) : linear;
            elements.push_back(e);
          }
        }
  std::sort(elements.begin(), elements.end(),
            [](const GroupElement& x, const GroupElement& y) {
              return x.perm < y.perm;
            });

  // induced action on circles
  const size_t nc = ctx->circles.size();
  circle_act.resize(elements.size() * nc);
  for (size_t e = 0; e < elements.size(); ++e) {
    const auto& perm = elements[e].perm;
    for (size_t c = 0; c < nc; ++c) {
      const Circle& ci = ctx->circles[c];
      int x = perm[ci.local[0]], y = perm[ci.local[1]], z = perm[ci.local[2]];
      uint16_t img = ctx->circle_id(x, y, z);
      if (img == kNone)
        throw std::logic_error("stabilizer element does not preserve circles");
      circle_act[e * nc + c] = img;
    }
  }

  to_zero.assign(nc, {});
  for (size_t e = 0; e < elements.size(); ++e)
    for (size_t c = 0; c < nc; ++c)
      if (circle_act[e * nc + c] == 0) {
        to_zero[c].push_back(static_cast<uint32_t>(e));
        break;
      }
}

std::vector<uint16_t> SpreadStabilizerGroup::image_of_circles(
    size_t e, const std::vector<uint16_t>& set) const {
  std::vector<uint16_t> out(set.size());
  const size_t nc = ctx->circles.size();
  for (size_t i = 0; i < set.size(); ++i) out[i] = circle_act[e * nc + set[i]];
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint16_t> SpreadStabilizerGroup::min_image(
    const std::vector<uint16_t>& set) const {
  if (set.empty()) return {};
  const size_t nc = ctx->circles.size();
  const size_t m = set.size();
  std::vector<uint16_t> best, cand(m);
  for (uint16_t s : set)
    for (uint32_t e : to_zero[s]) {
      const uint16_t* row = &circle_act[static_cast<size_t>(e) * nc];
      // every candidate starts with 0 once sorted, so the second-smallest
      // value decides most comparisons without sorting
      uint16_t lo2 = 0xffff;
      for (size_t i = 0; i < m; ++i) {
        uint16_t v = row[set[i]];
        cand[i] = v;
        if (v && v < lo2) lo2 = v;
      }
      if (!best.empty() && m > 1 && lo2 > best[1]) continue;
      std::sort(cand.begin(), cand.end());
      if (best.empty() || cand < best) best = cand;
    }
  return best;
}

uint64_t web_covered_bits(const SpreadContext& ctx,
                          const std::vector<uint16_t>& circles) {
  uint64_t bits = 0;
  for (uint16_t c : circles) bits |= ctx.circles[c].line_bits;
  return bits;
}

bool verify_web(const SpreadContext& ctx, const std::vector<uint16_t>& circles,
                int k) {
  if (k <= 0) return false;
  std::array<uint8_t, 50> mult{};
  for (uint16_t c : circles) {
    if (c >= ctx.circles.size()) return false;
    for (int j = 0; j <= ctx.geo.q; ++j) ++mult[ctx.circles[c].local[j]];
  }
  for (size_t i = 1; i < circles.size(); ++i)
    if (circles[i] <= circles[i - 1]) return false;
  for (int l = 0; l < ctx.spread_size(); ++l)
    if (mult[l] != 0 && mult[l] != k) return false;
  return true;
}

Web canonical_web(const SpreadContext& ctx, const SpreadStabilizerGroup& grp,
                  const Web& w) {
  if (!verify_web(ctx, w.circles, w.k))
    throw std::domain_error("canonical_web requires a valid k-web");
  Web out;
  out.k = w.k;
  out.circles = grp.min_image(w.circles);
  out.covered_bits = web_covered_bits(ctx, out.circles);
  return out;
}

std::vector<Web> search_webs(const SpreadContext& ctx,
                             const SpreadStabilizerGroup& grp, int k) {
  if (k <= 0) throw std::invalid_argument("web multiplicity must be positive");
  const int q = ctx.geo.q;
  const int s = ctx.spread_size();

  // Phase 1: connected k-webs through circle 0, canonical forms at every
  // node.  A complete connected web saturates its lines, so growing along a
  // deficient line of a canonical partial state reaches every class.
  std::vector<std::vector<uint16_t>> components;
  {
    std::deque<std::vector<uint16_t>> queue;
    std::unordered_set<std::string> seen;
    std::unordered_set<std::string> complete;
    std::vector<uint16_t> start{0};
    seen.insert(set_key(start));
    queue.push_back(start);
    while (!queue.empty()) {
      std::vector<uint16_t> state = std::move(queue.front());
      queue.pop_front();
      std::array<uint8_t, 50> mult{};
      for (uint16_t c : state)
        for (int j = 0; j <= q; ++j) ++mult[ctx.circles[c].local[j]];
      int branch_line = -1;
      for (int l = 0; l < s; ++l)
        if (mult[l] != 0 && mult[l] < k) {
          branch_line = l;
          break;
        }
      if (branch_line < 0) {
        std::string key = set_key(state);
        if (!complete.count(key)) {
          complete.insert(key);
          components.push_back(state);
        }
        continue;
      }
      for (uint16_t c : ctx.circles_with_line[branch_line]) {
        if (std::binary_search(state.begin(), state.end(), c)) continue;
        bool fits = true;
        for (int j = 0; j <= q; ++j)
          if (mult[ctx.circles[c].local[j]] + 1 > k) {
            fits = false;
            break;
          }
        if (!fits) continue;
        std::vector<uint16_t> child = state;
        child.insert(std::upper_bound(child.begin(), child.end(), c), c);
        std::vector<uint16_t> canon = grp.min_image(child);
        if (seen.insert(set_key(canon)).second) queue.push_back(canon);
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });

  std::vector<Web> out;

  // distinct orbit images of each component, with covered-line masks, for
  // assembling line-disjoint unions
  struct Image {
    std::vector<uint16_t> circles;
    uint64_t bits;
  };
  std::vector<std::vector<Image>> images(components.size());
  for (size_t ci = 0; ci < components.size(); ++ci) {
    std::unordered_set<std::string> dedupe;
    for (size_t e = 0; e < grp.order(); ++e) {
      std::vector<uint16_t> img = grp.image_of_circles(e, components[ci]);
      if (dedupe.insert(set_key(img)).second)
        images[ci].push_back({img, web_covered_bits(ctx, img)});
    }
  }

  // Phase 2: closure of the component classes under line-disjoint union.
  // Every k-web is a disjoint union of connected ones, and removing a
  // component of a canonical web leaves a smaller web whose canonical form
  // was already visited, so adding stored images reaches every class.
  std::deque<std::vector<uint16_t>> queue;
  std::unordered_set<std::string> seen;
  for (const auto& comp : components) {
    if (seen.insert(set_key(comp)).second) queue.push_back(comp);
  }
  while (!queue.empty()) {
    std::vector<uint16_t> state = std::move(queue.front());
    queue.pop_front();
    uint64_t bits = web_covered_bits(ctx, state);
    Web w;
    w.k = k;
    w.circles = state;
    w.covered_bits = bits;
    out.push_back(w);
    int budget = s - __builtin_popcountll(bits);
    for (const auto& image_list : images) {
      if (image_list.empty() ||
          __builtin_popcountll(image_list[0].bits) > budget)
        continue;
      for (const Image& img : image_list) {
        if (img.bits & bits) continue;
        std::vector<uint16_t> merged;
        merged.reserve(state.size() + img.circles.size());
        std::merge(state.begin(), state.end(), img.circles.begin(),
                   img.circles.end(), std::back_inserter(merged));
        std::vector<uint16_t> canon = grp.min_image(merged);
        if (seen.insert(set_key(canon)).second) queue.push_back(canon);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Web& a, const Web& b) {
    return a.circles.size() != b.circles.size()
               ? a.circles.size() < b.circles.size()
               : a.circles < b.circles;
  });
  return out;
}

}  // namespace fgeo
