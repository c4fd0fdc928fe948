// k-webs of circles in the regular spread and their classification up to the
// spread stabilizer.  The stabilizer PGammaL(2,q^2) is enumerated directly on
// PG(1,q^2), stored as permutations of the spread indices alongside a 4x4
// representative matrix, with a precomputed action table on circles and
// transversal lists that make minimal-image canonicalization cheap.
#pragma once

#include <cstdint>
#include <vector>

#include "fgeo/spreadcore.hpp"

namespace fgeo {

// A k-web: set of circles such that every covered spread line lies in
// exactly k of them.
struct Web {
  int k = 0;
  std::vector<uint16_t> circles;  // sorted circle ids
  uint64_t covered_bits = 0;      // bitmask of covered spread indices
  bool operator==(const Web&) const = default;
};

struct GroupElement {
  std::array<uint8_t, 50> perm{};  // action on spread indices, q^2+1 used
  Mat4 rep;                        // inducing projective matrix
};

struct SpreadStabilizerGroup {
  const SpreadContext* ctx;
  std::vector<GroupElement> elements;  // sorted by perm; elements[0] = identity
  std::vector<uint16_t> circle_act;    // flat order x n_circles table
  std::vector<std::vector<uint32_t>> to_zero;  // per circle: e with e(c) = 0

  explicit SpreadStabilizerGroup(const SpreadContext& context);

  size_t order() const { return elements.size(); }
  uint16_t act_circle(size_t e, uint16_t c) const {
    return circle_act[e * ctx->circles.size() + c];
  }
  // image of a sorted circle set, sorted
  std::vector<uint16_t> image_of_circles(size_t e,
                                         const std::vector<uint16_t>& set) const;
  // lexicographically minimal orbit image of a sorted circle set
  std::vector<uint16_t> min_image(const std::vector<uint16_t>& set) const;
};

uint64_t web_covered_bits(const SpreadContext& ctx,
                          const std::vector<uint16_t>& circles);

bool verify_web(const SpreadContext& ctx, const std::vector<uint16_t>& circles,
                int k);

// minimal-image normal form; domain error unless the input is a k-web
Web canonical_web(const SpreadContext& ctx, const SpreadStabilizerGroup& grp,
                  const Web& w);

// The complete k-web catalogue up to equivalence: canonical representatives
// sorted by size then lexicographically.  Connected webs are enumerated by a
// canonical-form search rooted at circle 0, then line-disjoint unions of
// connected components are assembled, so catalogue membership does not depend
// on connectivity.
std::vector<Web> search_webs(const SpreadContext& ctx,
                             const SpreadStabilizerGroup& grp, int k);

}  // namespace fgeo
