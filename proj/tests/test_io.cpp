#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fgeo/io.hpp"

using namespace fgeo;

namespace {

const SpreadContext& ctx5() {
  static SpreadContext c(5);
  return c;
}

const SpreadStabilizerGroup& grp5() {
  static SpreadStabilizerGroup g(ctx5());
  return g;
}

const std::vector<Web>& nests5() {
  static std::vector<Web> n = search_webs(ctx5(), grp5(), 2);
  return n;
}

std::string spread_text(const Spread& s) {
  std::ostringstream out;
  write_spread(out, ctx5().geo, s);
  return out.str();
}

// the parse error raised by reading `text` as a spread
ParseError spread_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_spread(in, ctx5().geo, "bad.spr");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, "");
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("spread files round-trip and are byte-deterministic") {
  const SpreadContext& c = ctx5();
  std::string text = spread_text(c.spread);
  CHECK(text == spread_text(c.spread));
  CHECK(text.substr(0, 4) == "q=5\n");
  CHECK(std::count(text.begin(), text.end(), '\n') == 27);

  std::istringstream in(text);
  Spread back = read_spread(in, c.geo, "regular.spr");
  CHECK(back == c.spread);

  // a non-regular spread round-trips too
  const Circle& circ = c.circles[7];
  Regulus reg = regulus_through(c.geo, c.spread.lines[circ.local[0]],
                                c.spread.lines[circ.local[1]],
                                c.spread.lines[circ.local[2]]);
  Spread derived = reverse_regulus(c.geo, c.spread, reg);
  std::istringstream in2(spread_text(derived));
  CHECK(read_spread(in2, c.geo) == derived);
}

TEST_CASE("spread parse errors carry the offending line number") {
  std::string good = spread_text(ctx5().spread);

  SUBCASE("bad header") {
    ParseError e = spread_error("p=5\n");
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("bad.spr:1") != std::string::npos);
  }
  SUBCASE("wrong q") {
    CHECK(spread_error("q=7\n").line == 1);
  }
  SUBCASE("non-integer token") {
    std::string text = good;
    text.replace(text.find("\n") + 1, 1, "x");
    ParseError e = spread_error(text);
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("integer") != std::string::npos);
  }
  SUBCASE("wrong field count") {
    // truncate the second data row to five entries
    size_t row2 = good.find('\n', good.find('\n') + 1) + 1;
    size_t row2_end = good.find('\n', row2);
    std::string row = good.substr(row2, row2_end - row2);
    row = row.substr(0, row.rfind(' '));
    std::string text = good.substr(0, row2) + row + good.substr(row2_end);
    ParseError e = spread_error(text);
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("expected 6") != std::string::npos);
  }
  SUBCASE("row is not a line") {
    // swap one point of the first data row for a point of the second
    std::istringstream in(good);
    std::string header, r1, r2;
    std::getline(in, header);
    std::getline(in, r1);
    std::getline(in, r2);
    std::string tampered = header + "\n" + r1.substr(0, r1.rfind(' ')) +
                           r2.substr(r2.rfind(' ')) + "\n";
    ParseError e = spread_error(tampered);
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("not a line") != std::string::npos);
  }
  SUBCASE("rows out of order") {
    std::istringstream in(good);
    std::vector<std::string> lines;
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    std::swap(lines[1], lines[2]);
    std::string text;
    for (const auto& s : lines) text += s + "\n";
    ParseError e = spread_error(text);
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("ascending order") != std::string::npos);
  }
  SUBCASE("wrong row count") {
    std::string text = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
    ParseError e = spread_error(text);
    CHECK(std::string(e.what()).find("expected 26 lines") != std::string::npos);
  }
  SUBCASE("valid lines that are not a spread") {
    // replace the last row with a line meeting the others: the line through
    // the first two points of different rows
    std::istringstream in(good);
    std::vector<std::string> rows;
    std::string l;
    while (std::getline(in, l)) rows.push_back(l);
    const Geometry& geo = ctx5().geo;
    LineId cross = geo.line_span(geo.lines[ctx5().spread.lines[0]].points[0],
                                 geo.lines[ctx5().spread.lines[1]].points[0]);
    std::string cross_row;
    for (int j = 0; j <= geo.q; ++j)
      cross_row += (j ? " " : "") + std::to_string(geo.lines[cross].points[j]);
    rows.back() = cross_row;
    std::sort(rows.begin() + 1, rows.end(), [](const auto& a, const auto& b) {
      std::istringstream sa(a), sb(b);
      std::vector<int> va, vb;
      int x;
      while (sa >> x) va.push_back(x);
      while (sb >> x) vb.push_back(x);
      return va < vb;
    });
    std::string text;
    for (const auto& s : rows) text += s + "\n";
    ParseError e = spread_error(text);
    CHECK(std::string(e.what()).find("not form a spread") != std::string::npos);
  }
}

TEST_CASE("web files round-trip") {
  const SpreadContext& c = ctx5();
  const Web& nest = nests5()[0];
  std::ostringstream out;
  write_web(out, c, nest);
  std::string text = out.str();
  CHECK(text.rfind("q=5 k=2\n", 0) == 0);

  std::istringstream in(text);
  Web back = read_web(in, c, "nest.web");
  CHECK(back == nest);

  // a 1-web (single circle) round-trips too
  Web single;
  single.k = 1;
  single.circles = {0};
  single.covered_bits = web_covered_bits(c, single.circles);
  std::ostringstream out1;
  write_web(out1, c, single);
  std::istringstream in1(out1.str());
  CHECK(read_web(in1, c) == single);
}

TEST_CASE("web parse errors") {
  const SpreadContext& c = ctx5();
  const Web& nest = nests5()[0];
  std::ostringstream out;
  write_web(out, c, nest);
  std::string good = out.str();

  auto read_err = [&](const std::string& text) {
    std::istringstream in(text);
    try {
      read_web(in, c, "bad.web");
    } catch (const ParseError& e) {
      return e;
    }
    FAIL("expected a ParseError");
    return ParseError("", 0, "");
  };

  CHECK(read_err("q=5\n").line == 1);          // missing k
  CHECK(read_err("q=7 k=2\n").line == 1);      // wrong q
  CHECK(read_err("q=5 k=4\n").line == 1);      // k does not divide q+1

  // a sextuple that is not a circle: perturb the last entry of a real one
  const Circle& circ = c.circles[0];
  bool found_bad = false;
  for (int x = 0; x < c.spread_size() && !found_bad; ++x) {
    std::vector<int> row(circ.local.begin(), circ.local.begin() + 6);
    if (std::find(row.begin(), row.end(), x) != row.end()) continue;
    row.back() = x;
    std::sort(row.begin(), row.end());
    std::string line;
    for (size_t j = 0; j < row.size(); ++j)
      line += (j ? " " : "") + std::to_string(row[j]);
    std::string text = good.substr(0, good.find('\n') + 1) + line + "\n";
    std::istringstream in(text);
    try {
      read_web(in, c, "bad.web");
    } catch (const ParseError& e) {
      if (std::string(e.what()).find("not a circle") != std::string::npos) {
        CHECK(e.line == 2);
        found_bad = true;
      }
    }
  }
  CHECK(found_bad);

  // right circles, wrong k: no longer a web
  std::string k3 = good;
  k3.replace(k3.find("k=2"), 3, "k=3");
  CHECK(std::string(read_err(k3).what()).find("3-web") != std::string::npos);
}

TEST_CASE("replacement files round-trip against their web") {
  const SpreadContext& c = ctx5();
  const Web& nest = nests5()[0];
  auto reps = find_bruck_replacements(c, nest);
  REQUIRE(!reps.empty());

  std::ostringstream out;
  write_replacement(out, "nest0.web", reps[0]);
  std::string text = out.str();
  CHECK(text.rfind("web=nest0.web\n", 0) == 0);

  std::istringstream in(text);
  Replacement back = read_replacement(in, c, nest, "rep.rpl");
  CHECK(back == reps[0]);

  auto read_err = [&](const std::string& t) {
    std::istringstream s(t);
    try {
      read_replacement(s, c, nest, "bad.rpl");
    } catch (const ParseError& e) {
      return e;
    }
    FAIL("expected a ParseError");
    return ParseError("", 0, "");
  };

  CHECK(read_err("q=5\n").line == 1);  // wrong header key
  // orbit index out of range for k=2
  std::string bad = "web=w\n" + std::to_string(nest.circles[0]) + " 2\n";
  CHECK(read_err(bad).line == 2);
  // circle set mismatch
  CHECK(std::string(read_err("web=w\n0 0\n").what())
            .find("do not match") != std::string::npos);
  // all-zero orbit choices are not a valid replacement for this nest
  std::string zeros = "web=w\n";
  for (uint16_t circ : nest.circles)
    zeros += std::to_string(circ) + " 0\n";
  bool zeros_valid = true;
  {
    std::istringstream s(zeros);
    try {
      read_replacement(s, c, nest, "zeros.rpl");
    } catch (const ParseError&) {
      zeros_valid = false;
    }
  }
  // either the zeros happen to be one of the two valid choices or parsing
  // rejects them; both are fine, but a tampered single orbit must fail
  if (zeros_valid) {
    std::string flip = "web=w\n";
    for (size_t i = 0; i < nest.circles.size(); ++i)
      flip += std::to_string(nest.circles[i]) + (i == 0 ? " 1\n" : " 0\n");
    std::istringstream s(flip);
    CHECK_THROWS_AS(read_replacement(s, c, nest, "flip.rpl"), ParseError);
  }
}

TEST_SUITE_END();
