#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fgeo/replace.hpp"

namespace fgeo {

// Malformed input file: what() carries "<file>:<line>: <reason>".
struct ParseError : std::runtime_error {
  std::string file;
  int line;  // 1-based; 0 when the problem is not tied to one line
  ParseError(std::string file_, int line_, const std::string& reason);
};

// Spread file: header "q=<q>", then q^2+1 rows of q+1 sorted point indices,
// rows in ascending lexicographic order (equivalently ascending line id).
void write_spread(std::ostream& out, const Geometry& geo, const Spread& spr);
void write_spread_file(const std::string& path, const Geometry& geo,
                       const Spread& spr);
Spread read_spread(std::istream& in, const Geometry& geo,
                   const std::string& name = "<stream>");
Spread read_spread_file(const std::string& path, const Geometry& geo);

// Web file: header "q=<q> k=<k>", then one row per circle listing its sorted
// spread-line indices; rows ascending (the circle-id order).
void write_web(std::ostream& out, const SpreadContext& ctx, const Web& w);
void write_web_file(const std::string& path, const SpreadContext& ctx,
                    const Web& w);
Web read_web(std::istream& in, const SpreadContext& ctx,
             const std::string& name = "<stream>");
Web read_web_file(const std::string& path, const SpreadContext& ctx);

// Replacement file: header "web=<filename>", then one row "circle_id
// orbit_index" per circle, circles ascending.  Reading resolves the orbit
// choices against the given web and validates the result.
void write_replacement(std::ostream& out, const std::string& web_name,
                       const Replacement& rep);
void write_replacement_file(const std::string& path,
                            const std::string& web_name,
                            const Replacement& rep);
Replacement read_replacement(std::istream& in, const SpreadContext& ctx,
                             const Web& w,
                             const std::string& name = "<stream>");
Replacement read_replacement_file(const std::string& path,
                                  const SpreadContext& ctx, const Web& w);

// The web file referenced by a replacement file's header.
std::string replacement_web_reference(const std::string& path);

// Header peeks, for choosing the right context before a full parse.
int spread_file_q(const std::string& path);
std::pair<int, int> web_file_header(const std::string& path);  // (q, k)

}  // namespace fgeo
