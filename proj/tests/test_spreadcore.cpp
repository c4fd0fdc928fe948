#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fgeo/spreadcore.hpp"

using namespace fgeo;

namespace {

const SpreadContext& ctx5() {
  static SpreadContext c(5);
  return c;
}

const SpreadContext& ctx7() {
  static SpreadContext c(7);
  return c;
}

}  // namespace

TEST_SUITE("spreadcore") {

TEST_CASE("regular spread partitions the points") {
  const SpreadContext& c = ctx5();
  CHECK(static_cast<int>(c.spread.lines.size()) == 26);
  CHECK(std::is_sorted(c.spread.lines.begin(), c.spread.lines.end()));
  for (size_t i = 0; i < c.spread.lines.size(); ++i)
    for (size_t j = i + 1; j < c.spread.lines.size(); ++j)
      CHECK(c.geo.lines_skew(c.spread.lines[i], c.spread.lines[j]));
  CHECK(is_valid_spread(c.geo, c.spread.lines));

  const SpreadContext& c7 = ctx7();
  CHECK(static_cast<int>(c7.spread.lines.size()) == 50);
  CHECK(is_valid_spread(c7.geo, c7.spread.lines));
}

TEST_CASE("spread validation rejects near-misses") {
  const SpreadContext& c = ctx5();
  std::vector<LineId> lines = c.spread.lines;
  std::vector<LineId> short_list(lines.begin(), lines.end() - 1);
  CHECK(!is_valid_spread(c.geo, short_list));
  // swap one member for a line meeting another member
  std::vector<LineId> bad = lines;
  for (int l = 0; l < c.geo.n_lines; ++l)
    if (c.local_of_line[l] < 0 && !c.geo.lines_skew(l, lines[0])) {
      bad[25] = static_cast<LineId>(l);
      break;
    }
  CHECK(!is_valid_spread(c.geo, bad));
  std::vector<LineId> dup = lines;
  dup[25] = dup[0];
  CHECK(!is_valid_spread(c.geo, dup));
}

TEST_CASE("kernel homology has projective order q+1 and fixes spread lines") {
  const SpreadContext& c = ctx5();
  Mat4 id = c.geo.identity_mat();
  Mat4 p = c.phi;
  for (int i = 1; i < 6; ++i) {
    CHECK(c.geo.mat_normalize(p) != id);
    p = c.geo.mat_mul(p, c.phi);
  }
  CHECK(c.geo.mat_normalize(p) == id);

  for (LineId l : c.spread.lines) {
    CHECK(c.geo.map_line(l, c.phi) == l);
    // single cycle on the line's points
    PointId start = c.geo.lines[l].points[0];
    std::set<PointId> orbit;
    PointId cur = start;
    do {
      orbit.insert(cur);
      cur = c.geo.map_point(cur, c.phi);
    } while (cur != start);
    CHECK(orbit.size() == 6);
  }

  const SpreadContext& c7 = ctx7();
  Mat4 p7 = c7.phi;
  for (int i = 1; i < 8; ++i) {
    CHECK(c7.geo.mat_normalize(p7) != c7.geo.identity_mat());
    p7 = c7.geo.mat_mul(p7, c7.phi);
  }
  CHECK(c7.geo.mat_normalize(p7) == c7.geo.identity_mat());
  for (LineId l : c7.spread.lines) CHECK(c7.geo.map_line(l, c7.phi) == l);
}

TEST_CASE("circle census of the regular spread") {
  const SpreadContext& c = ctx5();
  CHECK(static_cast<int>(c.circles.size()) == 130);  // q(q^2+1)
  CHECK(static_cast<int>(ctx7().circles.size()) == 350);

  // sorted by local tuple, all tuples strictly increasing
  for (size_t i = 0; i < c.circles.size(); ++i) {
    const Circle& ci = c.circles[i];
    for (int j = 0; j < 5; ++j) CHECK(ci.local[j] < ci.local[j + 1]);
    if (i > 0) CHECK(c.circles[i - 1].local < ci.local);
    CHECK(__builtin_popcountll(ci.line_bits) == 6);
  }

  // every spread line lies in q(q+1) circles; every pair in exactly q+1
  for (int a = 0; a < 26; ++a)
    CHECK(static_cast<int>(c.circles_with_line[a].size()) == 30);
  for (int a = 0; a < 26; a += 3)
    for (int b = a + 1; b < 26; b += 5) {
      int through = 0;
      for (const Circle& ci : c.circles)
        if ((ci.line_bits >> a & 1) && (ci.line_bits >> b & 1)) ++through;
      CHECK(through == 6);
    }
  for (int a = 0; a < 50; a += 7)
    CHECK(static_cast<int>(ctx7().circles_with_line[a].size()) == 56);
}

TEST_CASE("triple lookup is total and order-invariant") {
  const SpreadContext& c = ctx5();
  for (int a = 0; a < 26; a += 2)
    for (int b = a + 1; b < 26; b += 3)
      for (int d = b + 1; d < 26; d += 5) {
        uint16_t id = c.circle_id(a, b, d);
        REQUIRE(id != kNone);
        CHECK(c.circle_id(d, a, b) == id);
        CHECK(c.circle_id(b, d, a) == id);
        const Circle& ci = c.circles[id];
        CHECK(((ci.line_bits >> a) & 1) == 1);
        CHECK(((ci.line_bits >> b) & 1) == 1);
        CHECK(((ci.line_bits >> d) & 1) == 1);
      }
  CHECK_THROWS_AS(c.circle_id(3, 3, 7), std::invalid_argument);
}

TEST_CASE("opposite regulus: skewness, incidence, quadric, kernel cycle") {
  const SpreadContext& c = ctx5();
  for (size_t id = 0; id < c.circles.size(); id += 7) {
    const Circle& ci = c.circles[id];
    PointMask opp_mask{};
    for (int i = 0; i < 6; ++i) {
      LineId o = ci.opposite[i];
      CHECK(c.local_of_line[o] < 0);  // never a spread member
      for (int j = 0; j < 6; ++j)
        CHECK(c.geo.line_meet(o, c.spread.lines[ci.local[j]]) != kNone);
      for (int j = i + 1; j < 6; ++j)
        CHECK(c.geo.lines_skew(o, ci.opposite[j]));
      for (int w = 0; w < kMaskWords; ++w)
        opp_mask[w] |= c.geo.lines[o].mask[w];
    }
    CHECK(opp_mask == ci.mask);  // both rulings cover the same quadric

    // cycle order: starts at the smallest id, steps by the kernel map
    CHECK(ci.opposite[0] ==
          *std::min_element(ci.opposite.begin(), ci.opposite.begin() + 6));
    for (int i = 0; i < 6; ++i)
      CHECK(c.geo.map_line(ci.opposite[i], c.phi) == ci.opposite[(i + 1) % 6]);
  }
}

TEST_CASE("reversing a circle yields a valid spread") {
  const SpreadContext& c = ctx5();
  for (size_t id = 0; id < c.circles.size(); id += 17) {
    const Circle& ci = c.circles[id];
    std::vector<LineId> derived;
    for (int i = 0; i < 26; ++i)
      if (!((ci.line_bits >> i) & 1)) derived.push_back(c.spread.lines[i]);
    derived.insert(derived.end(), ci.opposite.begin(), ci.opposite.begin() + 6);
    std::sort(derived.begin(), derived.end());
    CHECK(is_valid_spread(c.geo, derived));
  }
}

TEST_CASE("semitransversal orbits partition the opposite ruling") {
  const SpreadContext& c = ctx5();
  Mat4 psi = c.geo.mat_mul(c.phi, c.phi);
  for (uint16_t id = 0; id < c.circles.size(); id += 11) {
    const Circle& ci = c.circles[id];
    std::set<LineId> whole(ci.opposite.begin(), ci.opposite.begin() + 6);
    auto full = c.semitransversal(id, 1, 0);
    CHECK(std::set<LineId>(full.begin(), full.end()) == whole);

    for (int k : {2, 3, 6}) {
      std::set<LineId> seen;
      std::vector<LineId> mins;
      for (int orbit = 0; orbit < k; ++orbit) {
        auto part = c.semitransversal(id, k, orbit);
        CHECK(static_cast<int>(part.size()) == 6 / k);
        CHECK(std::is_sorted(part.begin(), part.end()));
        mins.push_back(part[0]);
        for (LineId l : part) {
          CHECK(!seen.count(l));
          seen.insert(l);
          // the k-th kernel power preserves each orbit
          LineId im = l;
          for (int t = 0; t < k; ++t) im = c.geo.map_line(im, c.phi);
          CHECK(std::find(part.begin(), part.end(), im) != part.end());
        }
      }
      CHECK(seen == whole);
      CHECK(std::is_sorted(mins.begin(), mins.end()));  // orbit index anchor
    }
    CHECK_THROWS_AS(c.semitransversal(id, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(c.semitransversal(id, 2, 2), std::invalid_argument);
  }
}

TEST_CASE("regulus closure and opposite-of-opposite") {
  const SpreadContext& c = ctx5();
  const Circle& ci = c.circles[40];
  std::vector<LineId> lines;
  for (int j = 0; j < 6; ++j) lines.push_back(c.spread.lines[ci.local[j]]);
  std::sort(lines.begin(), lines.end());
  // regulus through any member triple reproduces the same line sets
  Regulus r1 = regulus_through(c.geo, lines[0], lines[2], lines[5]);
  Regulus r2 = regulus_through(c.geo, lines[1], lines[3], lines[4]);
  CHECK(r1.lines == lines);
  CHECK(r2.lines == lines);
  CHECK(r1.opposite == r2.opposite);
  // swapping rulings: the regulus through three opposite lines
  Regulus r3 =
      regulus_through(c.geo, r1.opposite[0], r1.opposite[1], r1.opposite[2]);
  CHECK(r3.lines == r1.opposite);
  CHECK(r3.opposite == lines);
  // non-skew input is rejected
  LineId meeting = c.geo.lines_through[c.geo.lines[lines[0]].points[0]][0];
  if (meeting == lines[0])
    meeting = c.geo.lines_through[c.geo.lines[lines[0]].points[0]][1];
  CHECK_THROWS_AS(regulus_through(c.geo, lines[0], meeting, lines[5]),
                  std::invalid_argument);
}

TEST_CASE("construction is deterministic") {
  const SpreadContext& a = ctx5();
  SpreadContext b(5);
  CHECK(a.spread.lines == b.spread.lines);
  CHECK(a.circles.size() == b.circles.size());
  for (size_t i = 0; i < a.circles.size(); ++i) {
    CHECK(a.circles[i].local == b.circles[i].local);
    CHECK(a.circles[i].opposite == b.circles[i].opposite);
  }
  CHECK(a.g.a == b.g.a);
  CHECK(a.g.b == b.g.b);
}

}  // TEST_SUITE
