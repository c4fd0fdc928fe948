#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "fgeo/classify.hpp"

using namespace fgeo;

namespace {

const SpreadContext& ctx5() {
  static SpreadContext c(5);
  return c;
}

const Spread& hall_spread() {
  static Spread s = [] {
    const SpreadContext& c = ctx5();
    const Circle& circ = c.circles[0];
    Regulus reg = regulus_through(c.geo, c.spread.lines[circ.local[0]],
                                  c.spread.lines[circ.local[1]],
                                  c.spread.lines[circ.local[2]]);
    return reverse_regulus(c.geo, c.spread, reg);
  }();
  return s;
}

Spread transformed(const Spread& s, const Mat4& m) {
  const Geometry& geo = ctx5().geo;
  Spread out;
  out.q = s.q;
  for (LineId l : s.lines) out.lines.push_back(geo.map_line(l, m));
  std::sort(out.lines.begin(), out.lines.end());
  return out;
}

Mat4 shear() {
  Mat4 m;
  m.at(0, 0) = 1;
  m.at(0, 1) = 1;
  m.at(1, 1) = 1;
  m.at(2, 2) = 1;
  m.at(3, 2) = 2;
  m.at(3, 3) = 1;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("classify");

TEST_CASE("reference tables are consistent") {
  const auto& inv = reference_invariants();
  const auto& routes = reference_routes();
  CHECK(inv.size() == 21);
  CHECK(routes.size() == 21);

  // fingerprints are pairwise distinct, so (p-rank, group order) identifies
  // the census label
  std::set<std::pair<int, uint64_t>> fps;
  for (const auto& [label, fp] : inv) fps.insert(fp);
  CHECK(fps.size() == 21);

  // route column totals: 4 subregular, 11 nest-replaceable, 3 new hybrids,
  // 13 triple-web planes; one plane (B2) is reached by no route
  std::array<int, 4> totals{};
  int unreached = 0;
  for (const auto& [label, r] : routes) {
    CHECK(inv.count(label) == 1);
    bool any = false;
    for (int j = 0; j < 4; ++j) {
      totals[j] += r[j];
      any = any || r[j];
    }
    if (!any) {
      ++unreached;
      CHECK(label == "B2");
    }
  }
  CHECK(totals[0] == 4);
  CHECK(totals[1] == 11);
  CHECK(totals[2] == 3);
  CHECK(totals[3] == 13);
  CHECK(unreached == 1);
}

TEST_CASE("GL(4,5) stabilizer orders of the regular and derived spreads") {
  const SpreadContext& c = ctx5();
  // the spread stabilizer acts on the 26 lines as a group of order 31200
  // with kernel the 24 nonzero field-multiplication homologies
  CHECK(gl_stabilizer_order(c.geo, c.spread) == 748800);
  CHECK(748800 == 31200 * 24);
  CHECK(gl_stabilizer_order(c.geo, hall_spread()) == 5760);
}

TEST_CASE("collineation group orders") {
  const SpreadContext& c = ctx5();
  // translations times linear complement, times the extra point-transitivity
  // factor 651 for the Desarguesian plane only
  CHECK(full_group_order(c.geo, c.spread) == 304668000000ULL);
  CHECK(304668000000ULL == 625ULL * 748800 * 651);
  CHECK(full_group_order(c.geo, hall_spread()) == 3600000);
  CHECK(3600000 == 625 * 5760);
}

TEST_CASE("classify_spread fingerprints and labels") {
  const SpreadContext& c = ctx5();
  SpreadInvariants reg = classify_spread(c.geo, c.spread);
  CHECK(reg.rank == 226);
  CHECK(reg.group_order == 304668000000ULL);
  CHECK(reg.regulus_count == 130);
  CHECK(reg.label == "S1");

  SpreadInvariants hall = classify_spread(c.geo, hall_spread());
  CHECK(hall.rank == 251);
  CHECK(hall.group_order == 3600000);
  CHECK(hall.regulus_count == 31);
  CHECK(hall.label == "S2");
}

TEST_CASE("invariants are invariant under a change of basis") {
  const SpreadContext& c = ctx5();
  Spread image = transformed(hall_spread(), shear());
  REQUIRE(image.lines != hall_spread().lines);
  SpreadInvariants a = classify_spread(c.geo, hall_spread());
  SpreadInvariants b = classify_spread(c.geo, image);
  CHECK(a.rank == b.rank);
  CHECK(a.gl_stabilizer == b.gl_stabilizer);
  CHECK(a.group_order == b.group_order);
  CHECK(a.regulus_count == b.regulus_count);
  CHECK(a.label == b.label);
}

TEST_CASE("spreads_isomorphic finds witnesses and rejects non-isomorphic pairs") {
  const SpreadContext& c = ctx5();
  CHECK(!spreads_isomorphic(c.geo, c.spread, hall_spread()).has_value());
  CHECK(!spreads_isomorphic(c.geo, hall_spread(), c.spread).has_value());

  Spread image = transformed(hall_spread(), shear());
  auto w = spreads_isomorphic(c.geo, hall_spread(), image);
  REQUIRE(w.has_value());
  // the witness carries the one line set onto the other
  CHECK(transformed(hall_spread(), *w).lines == image.lines);

  auto id = spreads_isomorphic(c.geo, c.spread, c.spread);
  REQUIRE(id.has_value());
  CHECK(transformed(c.spread, *id).lines == c.spread.lines);
}

TEST_SUITE_END();
