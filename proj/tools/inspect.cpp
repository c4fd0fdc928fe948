// Census summary printer: enumerates the q=5 web catalogues and reports,
// per class, its size, stabilizer order inside the spread's group, and
// replaceability, without classifying the resulting planes (use the CLI's
// `atlas` command for that).

#include <cstdio>
#include <vector>

#include "fgeo/replace.hpp"
#include "fgeo/webs.hpp"

using namespace fgeo;

namespace {

size_t web_stab_order(const SpreadStabilizerGroup& g,
                      const std::vector<uint16_t>& w) {
  size_t n = 0;
  for (size_t e = 0; e < g.order(); ++e)
    if (g.image_of_circles(e, w) == w) ++n;
  return n;
}

void report(const SpreadContext& ctx, const SpreadStabilizerGroup& grp,
            int k) {
  std::vector<Web> webs = search_webs(ctx, grp, k);
  std::printf("k=%d: %zu classes\n", k, webs.size());
  std::printf("  class  circles  stab  bruck  hemi\n");
  for (size_t i = 0; i < webs.size(); ++i) {
    const Web& w = webs[i];
    size_t stab = web_stab_order(grp, w.circles);
    size_t bruck = find_bruck_replacements(ctx, w).size();
    size_t hemi = find_hemi_replacements(ctx, w).size();
    std::printf("  %5zu  %7zu  %4zu  %5zu  %4zu\n", i, w.circles.size(), stab,
                bruck, hemi);
  }
}

}  // namespace

int main() {
  SpreadContext ctx(5);
  SpreadStabilizerGroup grp(ctx);
  std::printf("q=5: %d spread lines, %zu circles, group order %zu\n",
              ctx.spread_size(), ctx.circles.size(), grp.order());
  for (int k : {1, 2, 3}) report(ctx, grp, k);
  auto unions = enumerate_nest_unions(ctx, grp, search_webs(ctx, grp, 2));
  std::printf("nest unions: %zu classes\n", unions.size());
  return 0;
}
