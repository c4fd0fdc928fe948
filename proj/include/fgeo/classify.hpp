#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgeo/planes.hpp"
#include "fgeo/replace.hpp"
#include "fgeo/webs.hpp"

namespace fgeo {

// Order of the stabilizer of the spread's line set in GL(4,q), counted by a
// frame backtrack: the images of a fixed ordered skew line triple determine
// a coset of GL(2,q), and each candidate matrix is tested on every line.
uint64_t gl_stabilizer_order(const Geometry& geo, const Spread& spr);

// A matrix mapping spread `a` onto spread `b` as line sets, if one exists.
std::optional<Mat4> spreads_isomorphic(const Geometry& geo, const Spread& a,
                                       const Spread& b);

// Collineation group order of the spread's plane: q^4 translations times the
// linear complement, with the extra ell-infinity transitivity factor
// q^4+q^2+1 exactly when the spread is regular (every line triple spans a
// contained regulus).
uint64_t full_group_order(const Geometry& geo, const Spread& spr);

// Invariants of one spread, with its census label when the fingerprint
// (p-rank, group order) matches a known row; "?" otherwise.
struct SpreadInvariants {
  int rank = 0;
  uint64_t gl_stabilizer = 0;
  uint64_t group_order = 0;
  int regulus_count = 0;
  std::string label = "?";
};

SpreadInvariants classify_spread(const Geometry& geo, const Spread& spr);

// Reference invariants for the 21 translation planes of order 25
// (Czerwinski-Oakden labels), keyed by label: {p-rank, group order}.
const std::map<std::string, std::pair<int, uint64_t>>& reference_invariants();

// Expected web-route grid: for each label, which of the four construction
// routes (1-web, 2-web, 1-web + 2-web, 3-web) reach it.
const std::map<std::string, std::array<bool, 4>>& reference_routes();

// The full genealogy: runs every replacement stage at q=5 and classifies
// every spread produced.
struct AtlasEntry {
  std::string label;
  int rank = 0;
  uint64_t group_order = 0;
  int regulus_count = -1;          // -1 when the label was never reached
  std::array<bool, 4> routes{};    // 1-web, 2-web, hybrid, 3-web
  bool reached = false;
};

struct Atlas {
  std::vector<AtlasEntry> entries;  // all 21 labels in census order
  int web1_classes = 0;
  int nest_classes = 0;
  int nest_replaceable = 0;
  int union_classes = 0;
  int web3_classes = 0;
  int web3_replaceable = 0;
  int web3_spread_classes = 0;      // distinct labels over all 3-web spreads
  std::vector<std::string> web1_labels;   // per 1-web class
  std::vector<std::string> web3_labels;   // per 3-web class, "" if fixed
  std::vector<std::string> union_labels;  // per union class
  std::vector<std::string> nest_labels;   // per nest class, "" if fixed
  std::map<std::string, Spread> witnesses;  // first spread reached per label
  std::vector<std::string> notes;
};

// jobs: worker threads for the per-spread classification (>=1); results are
// merged in deterministic order regardless of scheduling.
Atlas genealogy_atlas(const SpreadContext& ctx, const SpreadStabilizerGroup& grp,
                      int jobs = 1);

}  // namespace fgeo
