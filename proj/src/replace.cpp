#include "fgeo/replace.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace fgeo {

namespace {

void mask_or(PointMask& acc, const PointMask& m) {
  for (size_t i = 0; i < kMaskWords; ++i) acc[i] |= m[i];
}

bool mask_intersects(const PointMask& a, const PointMask& b) {
  return !masks_disjoint(a, b);
}

PointMask lines_mask(const Geometry& geo, const std::vector<LineId>& lines) {
  PointMask m{};
  for (LineId l : lines) mask_or(m, geo.lines[l].mask);
  return m;
}

// covered points of a web, via its covered spread lines
PointMask web_points(const SpreadContext& ctx, const Web& w) {
  PointMask m{};
  for (int l = 0; l < ctx.spread_size(); ++l)
    if ((w.covered_bits >> l) & 1)
      mask_or(m, ctx.geo.lines[ctx.spread.lines[l]].mask);
  return m;
}

std::string key_of(const std::vector<uint16_t>& v) {
  return std::string(reinterpret_cast<const char*>(v.data()),
                     v.size() * sizeof(uint16_t));
}

}  // namespace

std::vector<LineId> replacement_lines(const Replacement& rep) {
  std::vector<LineId> out;
  for (const auto& set : rep.chosen) out.insert(out.end(), set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool verify_replacement(const SpreadContext& ctx, const Web& w,
                        const Replacement& rep) {
  const int q = ctx.geo.q;
  if (rep.k != w.k || rep.circles != w.circles) return false;
  if (rep.chosen.size() != rep.circles.size()) return false;
  if (rep.is_bruck && rep.orbit_index.size() != rep.circles.size()) return false;
  const size_t set_size =
      rep.is_bruck ? static_cast<size_t>((q + 1) / rep.k)
                   : static_cast<size_t>((q + 1) / 2);
  PointMask acc{};
  for (size_t i = 0; i < rep.circles.size(); ++i) {
    const std::vector<LineId>& set = rep.chosen[i];
    if (set.size() != set_size) return false;
    if (!std::is_sorted(set.begin(), set.end())) return false;
    const Circle& ci = ctx.circles[rep.circles[i]];
    for (LineId l : set) {
      const auto* end = ci.opposite.data() + ctx.circle_size();
      if (std::find(ci.opposite.data(), end, l) == end) return false;
    }
    if (rep.is_bruck &&
        set != ctx.semitransversal(rep.circles[i], rep.k, rep.orbit_index[i]))
      return false;
    PointMask m = lines_mask(ctx.geo, set);
    if (mask_intersects(acc, m)) return false;
    mask_or(acc, m);
  }
  return acc == web_points(ctx, w);
}

std::vector<Replacement> find_bruck_replacements(const SpreadContext& ctx,
                                                 const Web& w) {
  const int k = w.k;
  const size_t t = w.circles.size();
  // per circle, the k orbits of the k-th kernel power with their point masks
  std::vector<std::vector<std::vector<LineId>>> orbit_lines(t);
  std::vector<std::vector<PointMask>> orbit_masks(t);
  for (size_t i = 0; i < t; ++i)
    for (int oi = 0; oi < k; ++oi) {
      std::vector<LineId> lines = ctx.semitransversal(w.circles[i], k, oi);
      orbit_masks[i].push_back(lines_mask(ctx.geo, lines));
      orbit_lines[i].push_back(std::move(lines));
    }

  std::vector<Replacement> out;
  std::vector<uint8_t> pick(t, 0);
  // depth-first over circles in ascending order, orbit indices ascending;
  // pairwise disjointness of the chosen lines is equivalent to covering
  // exactly the web's points, so the mask is the only constraint
  auto rec = [&](auto&& self, size_t depth, const PointMask& acc) -> void {
    if (depth == t) {
      Replacement rep;
      rep.k = k;
      rep.is_bruck = true;
      rep.circles = w.circles;
      rep.orbit_index = pick;
      for (size_t i = 0; i < t; ++i) rep.chosen.push_back(orbit_lines[i][pick[i]]);
      out.push_back(std::move(rep));
      return;
    }
    for (int oi = 0; oi < k; ++oi) {
      if (mask_intersects(acc, orbit_masks[depth][oi])) continue;
      PointMask next = acc;
      mask_or(next, orbit_masks[depth][oi]);
      pick[depth] = static_cast<uint8_t>(oi);
      self(self, depth + 1, next);
    }
  };
  rec(rec, 0, PointMask{});
  return out;
}

std::vector<Replacement> find_hemi_replacements(const SpreadContext& ctx,
                                                const Web& w) {
  if (w.k != 2)
    throw std::invalid_argument("hemi-replacements are defined for nests only");
  const int n = ctx.circle_size();
  const int half = n / 2;
  const size_t t = w.circles.size();

  // all half-subsets of each opposite regulus, in lexicographic order of the
  // position sets, with their point masks
  std::vector<int> positions(half);
  std::vector<std::vector<std::vector<LineId>>> subset_lines(t);
  std::vector<std::vector<PointMask>> subset_masks(t);
  std::vector<int> comb(half);
  for (int i = 0; i < half; ++i) comb[i] = i;
  std::vector<std::vector<int>> combos;
  while (true) {
    combos.push_back(comb);
    int i = half - 1;
    while (i >= 0 && comb[i] == n - half + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < half; ++j) comb[j] = comb[j - 1] + 1;
  }
  for (size_t ci = 0; ci < t; ++ci) {
    const Circle& circ = ctx.circles[w.circles[ci]];
    for (const auto& sel : combos) {
      std::vector<LineId> lines;
      for (int pos : sel) lines.push_back(circ.opposite[pos]);
      std::sort(lines.begin(), lines.end());
      subset_masks[ci].push_back(lines_mask(ctx.geo, lines));
      subset_lines[ci].push_back(std::move(lines));
    }
  }

  std::vector<Replacement> out;
  std::vector<size_t> pick(t, 0);
  auto rec = [&](auto&& self, size_t depth, const PointMask& acc) -> void {
    if (depth == t) {
      Replacement rep;
      rep.k = 2;
      rep.is_bruck = false;
      rep.circles = w.circles;
      for (size_t i = 0; i < t; ++i)
        rep.chosen.push_back(subset_lines[i][pick[i]]);
      out.push_back(std::move(rep));
      return;
    }
    for (size_t si = 0; si < subset_lines[depth].size(); ++si) {
      if (mask_intersects(acc, subset_masks[depth][si])) continue;
      PointMask next = acc;
      mask_or(next, subset_masks[depth][si]);
      pick[depth] = si;
      self(self, depth + 1, next);
    }
  };
  rec(rec, 0, PointMask{});
  return out;
}

Replacement complement_replacement(const SpreadContext& ctx,
                                   const Replacement& rep) {
  if (rep.k != 2)
    throw std::invalid_argument("complementation is defined for nests only");
  Replacement out;
  out.k = 2;
  out.is_bruck = rep.is_bruck;
  out.circles = rep.circles;
  for (size_t i = 0; i < rep.circles.size(); ++i) {
    const Circle& circ = ctx.circles[rep.circles[i]];
    std::vector<LineId> other;
    for (int j = 0; j < ctx.circle_size(); ++j) {
      LineId l = circ.opposite[j];
      if (!std::binary_search(rep.chosen[i].begin(), rep.chosen[i].end(), l))
        other.push_back(l);
    }
    std::sort(other.begin(), other.end());
    out.chosen.push_back(std::move(other));
    if (rep.is_bruck)
      out.orbit_index.push_back(static_cast<uint8_t>(1 - rep.orbit_index[i]));
  }
  return out;
}

Spread apply_replacement(const SpreadContext& ctx, const Web& w,
                         const Replacement& rep) {
  if (!verify_replacement(ctx, w, rep))
    throw std::logic_error("replacement does not match the web");
  Spread out;
  out.q = ctx.geo.q;
  for (int l = 0; l < ctx.spread_size(); ++l)
    if (!((w.covered_bits >> l) & 1)) out.lines.push_back(ctx.spread.lines[l]);
  std::vector<LineId> repl = replacement_lines(rep);
  out.lines.insert(out.lines.end(), repl.begin(), repl.end());
  std::sort(out.lines.begin(), out.lines.end());
  if (!is_valid_spread(ctx.geo, out.lines))
    throw std::logic_error("replacement did not produce a spread");
  return out;
}

Spread reverse_regulus(const Geometry& geo, const Spread& spr,
                       const Regulus& reg) {
  for (LineId l : reg.lines)
    if (!std::binary_search(spr.lines.begin(), spr.lines.end(), l))
      throw std::invalid_argument("regulus is not contained in the spread");
  Spread out;
  out.q = spr.q;
  for (LineId l : spr.lines)
    if (!std::binary_search(reg.lines.begin(), reg.lines.end(), l))
      out.lines.push_back(l);
  out.lines.insert(out.lines.end(), reg.opposite.begin(), reg.opposite.end());
  std::sort(out.lines.begin(), out.lines.end());
  if (!is_valid_spread(geo, out.lines))
    throw std::logic_error("regulus reversal did not produce a spread");
  return out;
}

std::vector<Regulus> reguli_in_spread(const Geometry& geo, const Spread& spr) {
  const size_t n = spr.lines.size();
  std::set<std::vector<LineId>> seen;
  std::vector<Regulus> out;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        Regulus reg =
            regulus_through(geo, spr.lines[a], spr.lines[b], spr.lines[c]);
        bool contained = true;
        for (LineId l : reg.lines)
          if (!std::binary_search(spr.lines.begin(), spr.lines.end(), l)) {
            contained = false;
            break;
          }
        if (!contained) continue;
        if (seen.insert(reg.lines).second) out.push_back(std::move(reg));
      }
  std::sort(out.begin(), out.end(),
            [](const Regulus& x, const Regulus& y) { return x.lines < y.lines; });
  return out;
}

NestUnion union_nests(const SpreadContext& ctx, const Web& n1,
                      const Replacement& r1, const Web& n2,
                      const Replacement& r2) {
  if (n1.k != 2 || n2.k != 2)
    throw std::invalid_argument("nest unions are defined for nests only");
  if (!verify_replacement(ctx, n1, r1) || !verify_replacement(ctx, n2, r2))
    throw std::invalid_argument("invalid replacement for a union part");

  std::vector<uint16_t> shared;
  std::set_intersection(n1.circles.begin(), n1.circles.end(),
                        n2.circles.begin(), n2.circles.end(),
                        std::back_inserter(shared));
  if (shared.size() != 1)
    throw std::invalid_argument("nests must share exactly one circle");
  const uint16_t rc = shared[0];
  if ((n1.covered_bits & n2.covered_bits) != ctx.circles[rc].line_bits)
    throw std::invalid_argument(
        "covered lines must overlap exactly in the shared circle");

  // Align the two halves of the shared circle's opposite regulus: the union
  // drops the shared circle, so the two parts must cover complementary
  // halves of its quadric.  For kernel-orbit halves one of the two
  // orientations of the second replacement always works.
  auto pos_in = [](const std::vector<uint16_t>& v, uint16_t x) {
    return static_cast<size_t>(
        std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  const std::vector<LineId>& s1 = r1.chosen[pos_in(n1.circles, rc)];
  std::vector<LineId> want;  // complement of s1 in the opposite regulus
  const Circle& circ = ctx.circles[rc];
  for (int j = 0; j < ctx.circle_size(); ++j)
    if (!std::binary_search(s1.begin(), s1.end(), circ.opposite[j]))
      want.push_back(circ.opposite[j]);
  std::sort(want.begin(), want.end());

  Replacement r2a = r2;
  if (r2a.chosen[pos_in(n2.circles, rc)] != want) {
    r2a = complement_replacement(ctx, r2a);
    if (r2a.chosen[pos_in(n2.circles, rc)] != want)
      throw std::invalid_argument(
          "replacements cannot be aligned on the shared circle");
  }

  NestUnion u;
  u.shared_circle = rc;
  u.combined.k = 2;
  std::set_union(n1.circles.begin(), n1.circles.end(), n2.circles.begin(),
                 n2.circles.end(), std::back_inserter(u.combined.circles));
  u.combined.circles.erase(
      std::find(u.combined.circles.begin(), u.combined.circles.end(), rc));
  u.combined.covered_bits = n1.covered_bits | n2.covered_bits;
  if (!verify_web(ctx, u.combined.circles, 2))
    throw std::logic_error("nest union is not a nest");

  u.replacement.k = 2;
  u.replacement.is_bruck = r1.is_bruck && r2a.is_bruck;
  u.replacement.circles = u.combined.circles;
  for (uint16_t c : u.combined.circles) {
    bool from_first = std::binary_search(n1.circles.begin(), n1.circles.end(), c);
    const Replacement& src = from_first ? r1 : r2a;
    size_t p = pos_in(from_first ? n1.circles : n2.circles, c);
    u.replacement.chosen.push_back(src.chosen[p]);
    if (u.replacement.is_bruck)
      u.replacement.orbit_index.push_back(src.orbit_index[p]);
  }
  if (!u.replacement.is_bruck) u.replacement.orbit_index.clear();
  if (!verify_replacement(ctx, u.combined, u.replacement))
    throw std::logic_error("combined replacement failed validation");
  return u;
}

std::vector<NestUnion> enumerate_nest_unions(const SpreadContext& ctx,
                                             const SpreadStabilizerGroup& grp,
                                             const std::vector<Web>& nests) {
  // keep only Bruck-replaceable classes, with a fixed first replacement
  std::vector<Web> reps;
  std::vector<Replacement> first_rep;
  for (const Web& w : nests) {
    std::vector<Replacement> found = find_bruck_replacements(ctx, w);
    if (found.empty()) continue;
    reps.push_back(w);
    first_rep.push_back(std::move(found[0]));
  }

  // distinct orbit images of every class, with covered-line masks
  struct Image {
    std::vector<uint16_t> circles;
    uint64_t bits;
  };
  std::vector<std::vector<Image>> images(reps.size());
  for (size_t j = 0; j < reps.size(); ++j) {
    std::unordered_set<std::string> dedupe;
    for (size_t e = 0; e < grp.order(); ++e) {
      std::vector<uint16_t> img = grp.image_of_circles(e, reps[j].circles);
      if (dedupe.insert(key_of(img)).second)
        images[j].push_back({std::move(img), 0});
    }
    for (Image& im : images[j]) im.bits = web_covered_bits(ctx, im.circles);
  }

  // any union is equivalent to one whose first part is a canonical class
  // representative, so pairs (class i, image of class j >= i) reach every
  // class of unions
  std::vector<std::pair<std::vector<uint16_t>, NestUnion>> found;
  std::unordered_set<std::string> seen;
  for (size_t i = 0; i < reps.size(); ++i) {
    const Web& n1 = reps[i];
    for (size_t j = i; j < reps.size(); ++j) {
      for (const Image& im : images[j]) {
        std::vector<uint16_t> shared;
        std::set_intersection(n1.circles.begin(), n1.circles.end(),
                              im.circles.begin(), im.circles.end(),
                              std::back_inserter(shared));
        if (shared.size() != 1) continue;
        if ((n1.covered_bits & im.bits) != ctx.circles[shared[0]].line_bits)
          continue;
        Web n2;
        n2.k = 2;
        n2.circles = im.circles;
        n2.covered_bits = im.bits;
        std::vector<Replacement> r2s = find_bruck_replacements(ctx, n2);
        if (r2s.empty()) continue;  // cannot happen: replaceability is invariant
        NestUnion u = union_nests(ctx, n1, first_rep[i], n2, r2s[0]);
        Web canon = canonical_web(ctx, grp, u.combined);
        if (!seen.insert(key_of(canon.circles)).second) continue;
        found.emplace_back(std::move(canon.circles), std::move(u));
      }
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) {
              return a.first.size() != b.first.size()
                         ? a.first.size() < b.first.size()
                         : a.first < b.first;
            });
  std::vector<NestUnion> out;
  for (auto& [key, u] : found) out.push_back(std::move(u));
  return out;
}

}  // namespace fgeo
