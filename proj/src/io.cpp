// Text file formats: spreads as sorted point-index rows, webs as sorted
// spread-index rows, replacements as (circle, orbit) pairs.  All writers are
// byte-deterministic; all readers validate fully and report failures with
// 1-based line numbers.
#include "fgeo/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace fgeo {

namespace {

std::string location(const std::string& file, int line) {
  if (line <= 0) return file;
  return file + ":" + std::to_string(line);
}

// Splits a line into base-10 integers; rejects any other token.
std::vector<long> int_fields(const std::string& text, const std::string& file,
                             int line) {
  std::vector<long> out;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || v < 0)
      throw ParseError(file, line, "expected a nonnegative integer, got '" +
                                       tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string read_header_line(std::istream& in, const std::string& file,
                             int& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(file, 1, "missing header");
  ++line_no;
  return line;
}

// Consumes "<key>=<value>" and returns the value text.
std::string header_value(const std::string& header, const std::string& key,
                         const std::string& file) {
  if (header.rfind(key + "=", 0) != 0)
    throw ParseError(file, 1, "header must start with '" + key + "='");
  return header.substr(key.size() + 1);
}

long parse_long(const std::string& text, const std::string& what,
                const std::string& file, int line) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty())
    throw ParseError(file, line, "malformed " + what + " '" + text + "'");
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  return out;
}

}  // namespace

ParseError::ParseError(std::string file_, int line_, const std::string& reason)
    : std::runtime_error(location(file_, line_) + ": " + reason),
      file(std::move(file_)),
      line(line_) {}

void write_spread(std::ostream& out, const Geometry& geo, const Spread& spr) {
  out << "q=" << spr.q << "\n";
  for (LineId l : spr.lines) {
    const ProjLine& pl = geo.lines[l];
    for (int j = 0; j <= geo.q; ++j) {
      if (j) out << ' ';
      out << pl.points[j];
    }
    out << "\n";
  }
}

Spread read_spread(std::istream& in, const Geometry& geo,
                   const std::string& name) {
  int line_no = 0;
  std::string header = read_header_line(in, name, line_no);
  long q = parse_long(header_value(header, "q", name), "q value", name, 1);
  if (q != geo.q)
    throw ParseError(name, 1,
                     "file has q=" + std::to_string(q) + ", expected q=" +
                         std::to_string(geo.q));

  Spread spr;
  spr.q = geo.q;
  const int row_len = geo.q + 1;
  const int n_rows = geo.q * geo.q + 1;
  std::string text;
  std::vector<uint16_t> prev;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    auto fields = int_fields(text, name, line_no);
    if (static_cast<int>(fields.size()) != row_len)
      throw ParseError(name, line_no,
                       "expected " + std::to_string(row_len) +
                           " point indices, got " +
                           std::to_string(fields.size()));
    std::vector<uint16_t> row;
    for (long v : fields) {
      if (v >= geo.n_points)
        throw ParseError(name, line_no,
                         "point index " + std::to_string(v) + " out of range");
      row.push_back(static_cast<uint16_t>(v));
    }
    if (!std::is_sorted(row.begin(), row.end()) ||
        std::adjacent_find(row.begin(), row.end()) != row.end())
      throw ParseError(name, line_no, "point indices must be strictly ascending");
    LineId l = geo.line_span(row[0], row[1]);
    const ProjLine& pl = geo.lines[l];
    for (int j = 0; j <= geo.q; ++j)
      if (pl.points[j] != row[j])
        throw ParseError(name, line_no, "points are not a line of PG(3,q)");
    if (!prev.empty() && !(prev < row))
      throw ParseError(name, line_no, "rows must be in ascending order");
    prev = row;
    spr.lines.push_back(l);
  }
  if (static_cast<int>(spr.lines.size()) != n_rows)
    throw ParseError(name, line_no,
                     "expected " + std::to_string(n_rows) + " lines, got " +
                         std::to_string(spr.lines.size()));
  if (!is_valid_spread(geo, spr.lines))
    throw ParseError(name, 0, "lines do not form a spread");
  return spr;
}

void write_web(std::ostream& out, const SpreadContext& ctx, const Web& w) {
  out << "q=" << ctx.geo.q << " k=" << w.k << "\n";
  for (uint16_t c : w.circles) {
    const Circle& circ = ctx.circles[c];
    for (int j = 0; j < ctx.circle_size(); ++j) {
      if (j) out << ' ';
      out << static_cast<int>(circ.local[j]);
    }
    out << "\n";
  }
}

Web read_web(std::istream& in, const SpreadContext& ctx,
             const std::string& name) {
  int line_no = 0;
  std::string header = read_header_line(in, name, line_no);
  std::istringstream hs(header);
  std::string qtok, ktok;
  hs >> qtok >> ktok;
  long q = parse_long(header_value(qtok, "q", name), "q value", name, 1);
  if (ktok.rfind("k=", 0) != 0)
    throw ParseError(name, 1, "header must be 'q=<q> k=<k>'");
  long k = parse_long(ktok.substr(2), "k value", name, 1);
  if (q != ctx.geo.q)
    throw ParseError(name, 1,
                     "file has q=" + std::to_string(q) + ", expected q=" +
                         std::to_string(ctx.geo.q));
  if (k < 1 || (ctx.geo.q + 1) % k != 0)
    throw ParseError(name, 1, "k must divide q+1");

  std::vector<uint16_t> circles;
  const int row_len = ctx.circle_size();
  const int s = ctx.spread_size();
  std::string text;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    auto vals = int_fields(text, name, line_no);
    if (static_cast<int>(vals.size()) != row_len)
      throw ParseError(name, line_no,
                       "expected " + std::to_string(row_len) +
                           " spread-line indices, got " +
                           std::to_string(vals.size()));
    for (long v : vals)
      if (v >= s)
        throw ParseError(name, line_no, "spread-line index " +
                                            std::to_string(v) +
                                            " out of range");
    if (!std::is_sorted(vals.begin(), vals.end()) ||
        std::adjacent_find(vals.begin(), vals.end()) != vals.end())
      throw ParseError(name, line_no, "indices must be strictly ascending");
    uint16_t c = ctx.circle_id(static_cast<int>(vals[0]),
                               static_cast<int>(vals[1]),
                               static_cast<int>(vals[2]));
    bool match = c != kNone;
    for (int j = 0; match && j < row_len; ++j)
      match = ctx.circles[c].local[j] == vals[j];
    if (!match)
      throw ParseError(name, line_no, "indices are not a circle of the spread");
    if (!circles.empty() && circles.back() >= c)
      throw ParseError(name, line_no, "rows must be in ascending order");
    circles.push_back(c);
  }
  if (!verify_web(ctx, circles, static_cast<int>(k)))
    throw ParseError(name, 0,
                     "circles do not form a " + std::to_string(k) + "-web");
  Web w;
  w.k = static_cast<int>(k);
  w.circles = circles;
  w.covered_bits = web_covered_bits(ctx, circles);
  return w;
}

void write_replacement(std::ostream& out, const std::string& web_name,
                       const Replacement& rep) {
  out << "web=" << web_name << "\n";
  for (size_t i = 0; i < rep.circles.size(); ++i)
    out << rep.circles[i] << ' ' << static_cast<int>(rep.orbit_index[i])
        << "\n";
}

Replacement read_replacement(std::istream& in, const SpreadContext& ctx,
                             const Web& w, const std::string& name) {
  int line_no = 0;
  std::string header = read_header_line(in, name, line_no);
  header_value(header, "web", name);  // presence check only

  Replacement rep;
  rep.k = w.k;
  rep.is_bruck = true;
  std::string text;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    auto vals = int_fields(text, name, line_no);
    if (vals.size() != 2)
      throw ParseError(name, line_no, "expected 'circle_id orbit_index'");
    if (vals[0] >= static_cast<long>(ctx.circles.size()))
      throw ParseError(name, line_no, "circle id out of range");
    if (vals[1] >= w.k)
      throw ParseError(name, line_no, "orbit index out of range");
    rep.circles.push_back(static_cast<uint16_t>(vals[0]));
    rep.orbit_index.push_back(static_cast<uint8_t>(vals[1]));
    rep.chosen.push_back(
        ctx.semitransversal(rep.circles.back(), w.k, vals[1]));
  }
  if (rep.circles != w.circles)
    throw ParseError(name, 0, "circle ids do not match the web");
  if (!verify_replacement(ctx, w, rep))
    throw ParseError(name, 0, "orbit choices are not a valid replacement");
  return rep;
}

std::string replacement_web_reference(const std::string& path) {
  std::ifstream in = open_input(path);
  int line_no = 0;
  std::string header = read_header_line(in, path, line_no);
  return header_value(header, "web", path);
}

int spread_file_q(const std::string& path) {
  std::ifstream in = open_input(path);
  int line_no = 0;
  std::string header = read_header_line(in, path, line_no);
  return static_cast<int>(
      parse_long(header_value(header, "q", path), "q value", path, 1));
}

std::pair<int, int> web_file_header(const std::string& path) {
  std::ifstream in = open_input(path);
  int line_no = 0;
  std::string header = read_header_line(in, path, line_no);
  std::istringstream hs(header);
  std::string qtok, ktok;
  hs >> qtok >> ktok;
  long q = parse_long(header_value(qtok, "q", path), "q value", path, 1);
  if (ktok.rfind("k=", 0) != 0)
    throw ParseError(path, 1, "header must be 'q=<q> k=<k>'");
  long k = parse_long(ktok.substr(2), "k value", path, 1);
  return {static_cast<int>(q), static_cast<int>(k)};
}

void write_spread_file(const std::string& path, const Geometry& geo,
                       const Spread& spr) {
  std::ofstream out = open_output(path);
  write_spread(out, geo, spr);
}

Spread read_spread_file(const std::string& path, const Geometry& geo) {
  std::ifstream in = open_input(path);
  return read_spread(in, geo, path);
}

void write_web_file(const std::string& path, const SpreadContext& ctx,
                    const Web& w) {
  std::ofstream out = open_output(path);
  write_web(out, ctx, w);
}

Web read_web_file(const std::string& path, const SpreadContext& ctx) {
  std::ifstream in = open_input(path);
  return read_web(in, ctx, path);
}

void write_replacement_file(const std::string& path,
                            const std::string& web_name,
                            const Replacement& rep) {
  std::ofstream out = open_output(path);
  write_replacement(out, web_name, rep);
}

Replacement read_replacement_file(const std::string& path,
                                  const SpreadContext& ctx, const Web& w) {
  std::ifstream in = open_input(path);
  return read_replacement(in, ctx, w, path);
}

}  // namespace fgeo
