#pragma once

#include <cstdint>
#include <vector>

#include "fgeo/webs.hpp"

namespace fgeo {

// A replacement for a k-web: one set of opposite-regulus lines per member
// circle, pairwise disjoint across the whole web (equivalently, covering
// exactly the web's points; the two conditions coincide by a counting
// argument, since the chosen lines all lie inside the covered point set).
//
// Bruck replacements choose a phi^k-orbit (a k-semitransversal) per circle
// and are recorded by orbit index; hemi-replacements (k = 2 only) choose an
// arbitrary half of each opposite regulus.  `chosen` always carries the
// explicit line sets, sorted within each circle.
struct Replacement {
  int k = 2;
  bool is_bruck = true;
  std::vector<uint16_t> circles;          // member circle ids, ascending
  std::vector<uint8_t> orbit_index;       // per circle; only if is_bruck
  std::vector<std::vector<LineId>> chosen;  // per circle, sorted line ids

  bool operator==(const Replacement&) const = default;
};

// all chosen lines of a replacement, sorted ascending
std::vector<LineId> replacement_lines(const Replacement& rep);

// Full definition check: per-circle sets are subsets of the right opposite
// reguli of the right size ((q+1)/k for Bruck, (q+1)/2 for hemi), the union
// is pairwise disjoint, and the covered points equal the web's points.
bool verify_replacement(const SpreadContext& ctx, const Web& w,
                        const Replacement& rep);

// All Bruck replacements of a k-web, in lexicographic order of the orbit
// index vector.  Empty if the web is not Bruck-replaceable.
std::vector<Replacement> find_bruck_replacements(const SpreadContext& ctx,
                                                 const Web& w);

// All hemi-replacements of a nest (k = 2 only; invalid_argument otherwise),
// in lexicographic order of the per-circle half-set choices.  Includes every
// Bruck replacement, since a phi^2-orbit is a half of the opposite regulus.
std::vector<Replacement> find_hemi_replacements(const SpreadContext& ctx,
                                                const Web& w);

// The complementary replacement of a nest replacement: each chosen half is
// swapped for the other half of its opposite regulus.  An involution that
// preserves validity (k = 2 only; invalid_argument otherwise).
Replacement complement_replacement(const SpreadContext& ctx,
                                   const Replacement& rep);

// Swap the web's covered lines for the replacement lines inside the regular
// spread; the result is validated.  logic_error if the inputs do not match
// or the outcome is not a spread.
Spread apply_replacement(const SpreadContext& ctx, const Web& w,
                         const Replacement& rep);

// Swap a regulus contained in `spr` (any spread) for its opposite regulus;
// the result is validated.  invalid_argument if the regulus is not contained
// in the spread.
Spread reverse_regulus(const Geometry& geo, const Spread& spr,
                       const Regulus& reg);

// All reguli fully contained in a spread, sorted by line tuple.  The regular
// spread contains q(q^2+1); a spread with no reguli yields an empty list.
std::vector<Regulus> reguli_in_spread(const Geometry& geo, const Spread& spr);

// A union of two nests meeting in exactly one shared circle whose lines are
// exactly the overlap of the covered line sets.  The combined object drops
// the shared circle; a Bruck replacement for it is assembled from Bruck
// replacements of the parts without further search by aligning the two
// halves of the shared circle's opposite regulus.
struct NestUnion {
  Web combined;               // the union nest (shared circle removed)
  Replacement replacement;    // a valid Bruck replacement for it
  uint16_t shared_circle = 0;
};

// Build the union of two concrete nests from given Bruck replacements of
// each.  invalid_argument unless the nests share exactly one circle, with
// covered-line overlap equal to that circle's lines.  The second replacement
// is complemented if needed so the parts agree on the shared circle; for
// Bruck inputs one of the two orientations always works.
NestUnion union_nests(const SpreadContext& ctx, const Web& n1,
                      const Replacement& r1, const Web& n2,
                      const Replacement& r2);

// All equivalence classes of union nests formed from pairs of (canonical)
// Bruck-replaceable nests: for each ordered class pair, the second nest runs
// over its whole orbit and valid unions are deduplicated by canonical form.
// Returns one concrete witness per class (with its assembled replacement),
// ordered by canonical form (size, then lexicographic).
std::vector<NestUnion> enumerate_nest_unions(const SpreadContext& ctx,
                                             const SpreadStabilizerGroup& grp,
                                             const std::vector<Web>& nests);

}  // namespace fgeo
