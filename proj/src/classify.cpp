// Spread isomorphism and invariants: GL(4,q) stabilizers by frame
// backtracking over ordered skew line triples, collineation group orders,
// census labels keyed by (p-rank, group order), and the genealogy of all
// web-replacement constructions at q = 5.
#include "fgeo/classify.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

namespace fgeo {
namespace {

using Mat2 = std::array<uint8_t, 4>;  // row-major

Mat2 mat2_inverse(const PrimeField& F, const Mat2& a) {
  int det = F.sub(F.mul(a[0], a[3]), F.mul(a[1], a[2]));
  int s = F.inv(det);
  return {static_cast<uint8_t>(F.mul(s, a[3])),
          static_cast<uint8_t>(F.mul(s, F.neg(a[1]))),
          static_cast<uint8_t>(F.mul(s, F.neg(a[2]))),
          static_cast<uint8_t>(F.mul(s, a[0]))};
}

Mat2 mat2_mul(const PrimeField& F, const Mat2& a, const Mat2& b) {
  return {static_cast<uint8_t>(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[2]))),
          static_cast<uint8_t>(F.add(F.mul(a[0], b[1]), F.mul(a[1], b[3]))),
          static_cast<uint8_t>(F.add(F.mul(a[2], b[0]), F.mul(a[3], b[2]))),
          static_cast<uint8_t>(F.add(F.mul(a[2], b[1]), F.mul(a[3], b[3])))};
}

Mat4 block_diag(const Mat2& a, const Mat2& b) {
  Mat4 m;
  m.at(0, 0) = a[0];
  m.at(0, 1) = a[1];
  m.at(1, 0) = a[2];
  m.at(1, 1) = a[3];
  m.at(2, 2) = b[0];
  m.at(2, 3) = b[1];
  m.at(3, 2) = b[2];
  m.at(3, 3) = b[3];
  return m;
}

// Change of basis sending the ordered skew triple (l0, l1, l2) to the
// standard frame: l0 -> <e1,e2>, l1 -> <e3,e4>, l2 -> {(x | x)}.  Row
// convention throughout: S maps the actual frame to the standard one, so a
// candidate map between two framed spreads is S1 * blockdiag(A0, A0) *
// S2^-1, with A0 running over GL(2,q).
struct Frame {
  Mat4 S;
  Mat4 Sinv;
};

Frame frame_of(const Geometry& geo, LineId l0, LineId l1, LineId l2) {
  const PrimeField& F = geo.F;
  Mat4 B;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) {
      B.at(r, c) = geo.lines[l0].basis[4 * r + c];
      B.at(2 + r, c) = geo.lines[l1].basis[4 * r + c];
    }
  Mat4 Binv = geo.mat_inverse(B);
  // l2 in the half-standard frame is the row space of [X | Y]; skewness to
  // l0 and l1 makes X and Y invertible, and [I | T] with T = X^-1 Y is the
  // graph form.
  std::array<std::array<uint8_t, 4>, 2> rows;
  for (int r = 0; r < 2; ++r) {
    std::array<uint8_t, 4> v{geo.lines[l2].basis[4 * r + 0],
                             geo.lines[l2].basis[4 * r + 1],
                             geo.lines[l2].basis[4 * r + 2],
                             geo.lines[l2].basis[4 * r + 3]};
    rows[r] = geo.map_vec(v, Binv);
  }
  Mat2 X{rows[0][0], rows[0][1], rows[1][0], rows[1][1]};
  Mat2 Y{rows[0][2], rows[0][3], rows[1][2], rows[1][3]};
  Mat2 T = mat2_mul(F, mat2_inverse(F, X), Y);
  Mat2 I{1, 0, 0, 1};
  Frame f;
  f.S = geo.mat_mul(Binv, block_diag(I, mat2_inverse(F, T)));
  f.Sinv = geo.mat_mul(block_diag(I, T), B);
  return f;
}

std::vector<Mat2> gl2_elements(const PrimeField& F) {
  std::vector<Mat2> out;
  for (int a = 0; a < F.q; ++a)
    for (int b = 0; b < F.q; ++b)
      for (int c = 0; c < F.q; ++c)
        for (int d = 0; d < F.q; ++d)
          if (F.sub(F.mul(a, d), F.mul(b, c)) != 0)
            out.push_back({static_cast<uint8_t>(a), static_cast<uint8_t>(b),
                           static_cast<uint8_t>(c), static_cast<uint8_t>(d)});
  return out;
}

// Counts the GL(4,q) maps carrying spread `a` onto spread `b` as line sets.
// Every such map sends the fixed base triple of `a` to some ordered triple
// of `b` and is then determined by one GL(2,q) block, so the scan over
// (target triple, block) pairs hits each map exactly once.  With
// `stop_at_first`, returns after the first hit (witness mode).
uint64_t frame_scan(const Geometry& geo, const Spread& a, const Spread& b,
                    bool stop_at_first, std::optional<Mat4>* witness) {
  const int s = static_cast<int>(a.lines.size());
  // b partitions the points, so the carrier line of any image point is a
  // table lookup, and a candidate line lands in b exactly when its second
  // basis point lies on the first point's carrier.
  std::vector<LineId> carrier(geo.n_points, kNone);
  for (LineId l : b.lines)
    for (int j = 0; j <= geo.q; ++j) carrier[geo.lines[l].points[j]] = l;
  auto image_in_b = [&](const std::array<uint8_t, 4>& v1,
                        const std::array<uint8_t, 4>& v2) {
    LineId l = carrier[geo.point_of_vec[geo.encode_vec(v1)]];
    return geo.point_on_line(geo.point_of_vec[geo.encode_vec(v2)], l);
  };

  Frame fa = frame_of(geo, a.lines[0], a.lines[1], a.lines[2]);
  std::vector<Mat2> blocks = gl2_elements(geo.F);
  const size_t nb = blocks.size();

  // Per block: the left factor S1 * blockdiag(A0, A0), plus the probe line's
  // basis rows already pushed through it, so each candidate can be rejected
  // after two vector-matrix products.
  const LineId probe = a.lines[3];
  std::vector<Mat4> lhs(nb);
  std::vector<std::array<std::array<uint8_t, 4>, 2>> probe_rows(nb);
  for (size_t t = 0; t < nb; ++t) {
    lhs[t] = geo.mat_mul(fa.S, block_diag(blocks[t], blocks[t]));
    for (int r = 0; r < 2; ++r) {
      std::array<uint8_t, 4> v{geo.lines[probe].basis[4 * r + 0],
                               geo.lines[probe].basis[4 * r + 1],
                               geo.lines[probe].basis[4 * r + 2],
                               geo.lines[probe].basis[4 * r + 3]};
      probe_rows[t][r] = geo.map_vec(v, lhs[t]);
    }
  }

  uint64_t count = 0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      if (j == i) continue;
      for (int k = 0; k < s; ++k) {
        if (k == i || k == j) continue;
        Frame fb = frame_of(geo, b.lines[i], b.lines[j], b.lines[k]);
        for (size_t t = 0; t < nb; ++t) {
          if (!image_in_b(geo.map_vec(probe_rows[t][0], fb.Sinv),
                          geo.map_vec(probe_rows[t][1], fb.Sinv)))
            continue;
          Mat4 cand = geo.mat_mul(lhs[t], fb.Sinv);
          bool ok = true;
          for (int m = 4; m < s && ok; ++m) {
            const ProjLine& pl = geo.lines[a.lines[m]];
            std::array<uint8_t, 4> r0{pl.basis[0], pl.basis[1], pl.basis[2],
                                      pl.basis[3]};
            std::array<uint8_t, 4> r1{pl.basis[4], pl.basis[5], pl.basis[6],
                                      pl.basis[7]};
            ok = image_in_b(geo.map_vec(r0, cand), geo.map_vec(r1, cand));
          }
          if (!ok) continue;
          ++count;
          if (witness && !*witness) *witness = cand;
          if (stop_at_first) return count;
        }
      }
    }
  return count;
}

}  // namespace

uint64_t gl_stabilizer_order(const Geometry& geo, const Spread& spr) {
  return frame_scan(geo, spr, spr, false, nullptr);
}

std::optional<Mat4> spreads_isomorphic(const Geometry& geo, const Spread& a,
                                       const Spread& b) {
  if (a.lines.size() != b.lines.size()) return std::nullopt;
  std::optional<Mat4> witness;
  frame_scan(geo, a, b, true, &witness);
  return witness;
}

uint64_t full_group_order(const Geometry& geo, const Spread& spr) {
  uint64_t stab = gl_stabilizer_order(geo, spr);
  int census = static_cast<int>(reguli_in_spread(geo, spr).size());
  const uint64_t q = geo.q;
  uint64_t order = q * q * q * q * stab;
  if (census == geo.q * (geo.q * geo.q + 1)) order *= q * q * q * q + q * q + 1;
  return order;
}

SpreadInvariants classify_spread(const Geometry& geo, const Spread& spr) {
  SpreadInvariants inv;
  inv.regulus_count = static_cast<int>(reguli_in_spread(geo, spr).size());
  inv.gl_stabilizer = gl_stabilizer_order(geo, spr);
  const uint64_t q = geo.q;
  inv.group_order = q * q * q * q * inv.gl_stabilizer;
  if (inv.regulus_count == geo.q * (geo.q * geo.q + 1))
    inv.group_order *= q * q * q * q + q * q + 1;
  inv.rank = p_rank(bruck_bose(geo, spr), geo.q);
  for (const auto& [label, fp] : reference_invariants())
    if (fp.first == inv.rank && fp.second == inv.group_order) inv.label = label;
  return inv;
}

const std::map<std::string, std::pair<int, uint64_t>>& reference_invariants() {
  static const std::map<std::string, std::pair<int, uint64_t>> table = {
      {"S1", {226, 304668000000ULL}}, {"S2", {251, 3600000}},
      {"S3", {260, 720000}},          {"S4", {258, 1440000}},
      {"S5", {259, 720000}},          {"A1", {262, 360000}},
      {"A2", {255, 2880000}},         {"A3", {253, 1500000}},
      {"A4", {256, 180000}},          {"A5", {259, 60000}},
      {"A6", {259, 360000}},          {"A7", {260, 300000}},
      {"A8", {257, 120000}},          {"B1", {258, 130000}},
      {"B2", {262, 130000}},          {"B3", {264, 90000}},
      {"B4", {239, 1800000}},         {"B5", {261, 4800000}},
      {"B6", {258, 120000}},          {"B7", {261, 240000}},
      {"B8", {262, 80000}},
  };
  return table;
}

const std::map<std::string, std::array<bool, 4>>& reference_routes() {
  // Columns: 1-web, 2-web, 1-web + 2-web hybrid, 3-web.  The hybrid column
  // lists only planes new at that stage; the other columns are literal.
  static const std::map<std::string, std::array<bool, 4>> table = {
      {"S1", {false, false, false, true}},
      {"S2", {true, false, false, true}},
      {"S3", {true, false, false, true}},
      {"S4", {true, false, false, true}},
      {"S5", {true, true, false, false}},
      {"A1", {false, true, false, true}},
      {"A2", {false, true, false, false}},
      {"A3", {false, true, false, false}},
      {"A4", {false, true, false, true}},
      {"A5", {false, false, true, true}},
      {"A6", {false, true, false, false}},
      {"A7", {false, false, true, false}},
      {"A8", {false, false, true, true}},
      {"B1", {false, false, false, true}},
      {"B2", {false, false, false, false}},
      {"B3", {false, true, false, false}},
      {"B4", {false, true, false, true}},
      {"B5", {false, true, false, false}},
      {"B6", {false, true, false, true}},
      {"B7", {false, true, false, true}},
      {"B8", {false, false, false, true}},
  };
  return table;
}

namespace {

// Census order: S1..S5, A1..A8, B1..B8.
int label_rank(const std::string& label) {
  int fam = label[0] == 'S' ? 0 : label[0] == 'A' ? 1 : 2;
  return fam * 10 + (label[1] - '0');
}

std::vector<std::string> census_labels() {
  std::vector<std::string> out;
  for (const auto& [label, fp] : reference_invariants()) out.push_back(label);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return label_rank(a) < label_rank(b);
  });
  return out;
}

// Subgroup of the spread stabilizer fixing a web (as a circle set).
std::vector<size_t> web_stabilizer(const SpreadStabilizerGroup& grp,
                                   const Web& w) {
  std::vector<size_t> out;
  for (size_t e = 0; e < grp.order(); ++e)
    if (grp.image_of_circles(e, w.circles) == w.circles) out.push_back(e);
  return out;
}

// Orbit key of a replacement under a web stabilizer element: the per-circle
// chosen line sets, mapped and re-sorted.
std::vector<std::pair<uint16_t, std::vector<LineId>>> replacement_key(
    const Geometry& geo, const SpreadStabilizerGroup& grp, size_t e,
    const Replacement& rep) {
  std::vector<std::pair<uint16_t, std::vector<LineId>>> key;
  for (size_t i = 0; i < rep.circles.size(); ++i) {
    std::vector<LineId> img;
    for (LineId l : rep.chosen[i])
      img.push_back(geo.map_line(l, grp.elements[e].rep));
    std::sort(img.begin(), img.end());
    key.emplace_back(grp.act_circle(e, rep.circles[i]), std::move(img));
  }
  std::sort(key.begin(), key.end());
  return key;
}

// One replacement per orbit of the web stabilizer, preserving input order.
std::vector<size_t> dedup_replacements(const Geometry& geo,
                                       const SpreadStabilizerGroup& grp,
                                       const std::vector<size_t>& stab,
                                       const std::vector<Replacement>& reps) {
  std::vector<size_t> kept;
  std::set<std::vector<std::pair<uint16_t, std::vector<LineId>>>> seen;
  for (size_t r = 0; r < reps.size(); ++r) {
    auto base = replacement_key(geo, grp, 0, reps[r]);
    if (seen.count(base)) continue;
    kept.push_back(r);
    for (size_t e : stab) seen.insert(replacement_key(geo, grp, e, reps[r]));
  }
  return kept;
}

std::string join_labels(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += "/";
    out += l;
  }
  return out;
}

}  // namespace

Atlas genealogy_atlas(const SpreadContext& ctx, const SpreadStabilizerGroup& grp,
                      int jobs) {
  const Geometry& geo = ctx.geo;
  Atlas atlas;

  // Every produced spread, deduplicated by line set; stage results reference
  // spreads by index so classification runs once per distinct spread.
  std::vector<Spread> unique;
  std::map<std::vector<LineId>, size_t> index_of;
  auto intern = [&](const Spread& s) {
    auto it = index_of.find(s.lines);
    if (it != index_of.end()) return it->second;
    size_t idx = unique.size();
    unique.push_back(s);
    index_of.emplace(s.lines, idx);
    return idx;
  };

  enum Route { kWeb1 = 0, kWeb2 = 1, kHybrid = 2, kWeb3 = 3 };
  std::vector<std::pair<size_t, int>> produced;  // (spread index, route)

  // Stage 1: subregular spreads, reversing every class of disjoint circle
  // sets in one step.
  std::vector<Web> webs1 = search_webs(ctx, grp, 1);
  atlas.web1_classes = static_cast<int>(webs1.size());
  std::vector<std::vector<size_t>> web1_spreads(webs1.size());
  for (size_t i = 0; i < webs1.size(); ++i)
    for (const Replacement& rep : find_bruck_replacements(ctx, webs1[i])) {
      size_t idx = intern(apply_replacement(ctx, webs1[i], rep));
      web1_spreads[i].push_back(idx);
      produced.emplace_back(idx, kWeb1);
    }

  // Stage 2: nest replacements.  Each replaceable nest contributes all of
  // its Bruck replacements (class labels are recorded per nest).
  std::vector<Web> nests = search_webs(ctx, grp, 2);
  atlas.nest_classes = static_cast<int>(nests.size());
  std::vector<std::vector<size_t>> nest_spreads(nests.size());
  for (size_t i = 0; i < nests.size(); ++i) {
    auto reps = find_bruck_replacements(ctx, nests[i]);
    if (reps.empty()) continue;
    ++atlas.nest_replaceable;
    for (const Replacement& rep : reps) {
      size_t idx = intern(apply_replacement(ctx, nests[i], rep));
      nest_spreads[i].push_back(idx);
      produced.emplace_back(idx, kWeb2);
    }
  }

  // Stage 2b: nest unions (they are nests as well; their labels are
  // recorded separately to cross-check the assembled replacements).
  std::vector<NestUnion> unions = enumerate_nest_unions(ctx, grp, nests);
  atlas.union_classes = static_cast<int>(unions.size());
  std::vector<size_t> union_spreads;
  for (const NestUnion& u : unions) {
    size_t idx = intern(apply_replacement(ctx, u.combined, u.replacement));
    union_spreads.push_back(idx);
    produced.emplace_back(idx, kWeb2);
  }

  // Stage 3: hybrid 1-web + 2-web replacements, realized as the derivations
  // (single regulus reversals) of every 2-web stage spread.
  std::vector<size_t> stage2;
  for (const auto& v : nest_spreads) stage2.insert(stage2.end(), v.begin(), v.end());
  stage2.insert(stage2.end(), union_spreads.begin(), union_spreads.end());
  std::sort(stage2.begin(), stage2.end());
  stage2.erase(std::unique(stage2.begin(), stage2.end()), stage2.end());
  for (size_t idx : stage2) {
    Spread base = unique[idx];  // intern() may reallocate `unique`
    for (const Regulus& reg : reguli_in_spread(geo, base))
      produced.emplace_back(intern(reverse_regulus(geo, base, reg)), kHybrid);
  }

  // Stage 4: 3-web replacements, deduplicated per class by the web
  // stabilizer.
  std::vector<Web> webs3 = search_webs(ctx, grp, 3);
  atlas.web3_classes = static_cast<int>(webs3.size());
  std::vector<std::vector<size_t>> web3_spreads(webs3.size());
  for (size_t i = 0; i < webs3.size(); ++i) {
    auto reps = find_bruck_replacements(ctx, webs3[i]);
    if (reps.empty()) continue;
    ++atlas.web3_replaceable;
    auto stab = web_stabilizer(grp, webs3[i]);
    for (size_t r : dedup_replacements(geo, grp, stab, reps)) {
      size_t idx = intern(apply_replacement(ctx, webs3[i], reps[r]));
      web3_spreads[i].push_back(idx);
      produced.emplace_back(idx, kWeb3);
    }
  }

  // Classify every distinct spread (deterministic order, optional threads).
  std::vector<SpreadInvariants> inv(unique.size());
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < unique.size(); ++i)
      inv[i] = classify_spread(geo, unique[i]);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < unique.size();
           i = next.fetch_add(1))
        inv[i] = classify_spread(geo, unique[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  // Unknown fingerprints get stable numbered names so the same spread never
  // appears under two unknowns.
  std::vector<std::string> final_label(unique.size());
  std::map<std::pair<int, uint64_t>, std::string> unknown_names;
  for (size_t i = 0; i < unique.size(); ++i) {
    if (inv[i].label != "?") {
      final_label[i] = inv[i].label;
      continue;
    }
    auto key = std::make_pair(inv[i].rank, inv[i].group_order);
    auto it = unknown_names.find(key);
    if (it == unknown_names.end()) {
      std::string name = "?" + std::to_string(unknown_names.size() + 1);
      it = unknown_names.emplace(key, name).first;
      atlas.notes.push_back(name + ": unclassified fingerprint, rank " +
                            std::to_string(inv[i].rank) + ", group order " +
                            std::to_string(inv[i].group_order) + ", " +
                            std::to_string(inv[i].regulus_count) + " reguli");
    }
    final_label[i] = it->second;
  }
  for (size_t i = 0; i < unique.size(); ++i)
    if (!atlas.witnesses.count(final_label[i]))
      atlas.witnesses.emplace(final_label[i], unique[i]);

  // Aggregate per label.
  std::map<std::string, AtlasEntry> by_label;
  for (const std::string& label : census_labels()) {
    AtlasEntry e;
    e.label = label;
    auto fp = reference_invariants().at(label);
    e.rank = fp.first;
    e.group_order = fp.second;
    by_label[label] = e;
  }
  for (const auto& [idx, route] : produced) {
    AtlasEntry& e = by_label[final_label[idx]];
    e.label = final_label[idx];
    e.reached = true;
    e.rank = inv[idx].rank;
    e.group_order = inv[idx].group_order;
    e.regulus_count = inv[idx].regulus_count;
    e.routes[route] = true;
  }

  auto labels_of = [&](const std::vector<size_t>& idxs) {
    std::set<std::string> out;
    for (size_t idx : idxs) out.insert(final_label[idx]);
    return out;
  };
  for (size_t i = 0; i < webs1.size(); ++i)
    atlas.web1_labels.push_back(join_labels(labels_of(web1_spreads[i])));
  for (size_t i = 0; i < nests.size(); ++i) {
    auto ls = labels_of(nest_spreads[i]);
    atlas.nest_labels.push_back(join_labels(ls));
    if (ls.size() > 1)
      atlas.notes.push_back("nest class " + std::to_string(i) +
                            ": replacements disagree on label");
  }
  for (size_t idx : union_spreads)
    atlas.union_labels.push_back(final_label[idx]);
  std::set<std::string> distinct3;
  for (size_t i = 0; i < webs3.size(); ++i) {
    auto ls = labels_of(web3_spreads[i]);
    atlas.web3_labels.push_back(join_labels(ls));
    distinct3.insert(ls.begin(), ls.end());
    if (ls.size() > 1)
      atlas.notes.push_back("3-web class " + std::to_string(i) +
                            ": replacements disagree on label");
  }
  atlas.web3_spread_classes = static_cast<int>(distinct3.size());

  // Labels are keyed purely to the (p-rank, group order) fingerprint table.
  // Published accounts disagree on which of S4 and A2 denotes the regular
  // nearfield plane and which the exceptional one; that naming question is
  // recorded here rather than adjudicated, since fingerprints identify the
  // planes unambiguously either way.
  atlas.notes.push_back(
      "naming: sources disagree on which of S4/A2 is the regular vs "
      "exceptional nearfield plane; labels follow the fingerprint table");

  for (const auto& [label, entry] : by_label) atlas.entries.push_back(entry);
  std::sort(atlas.entries.begin(), atlas.entries.end(),
            [](const AtlasEntry& a, const AtlasEntry& b) {
              bool ua = a.label[0] == '?', ub = b.label[0] == '?';
              if (ua != ub) return ub;
              if (ua) return a.label < b.label;
              return label_rank(a.label) < label_rank(b.label);
            });
  return atlas;
}

}  // namespace fgeo
