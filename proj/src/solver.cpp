#include "kexsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace kexsim {

const char* Objective::name() const {
  switch (kind) {
    case Kind::MaxCardinality: return "maxcard";
    case Kind::Sens: return "sens";
    case Kind::Time: return "time";
    case Kind::CriticalThenSens: return "critical-then-sens";
    case Kind::Weighted: return "weighted";
  }
  return "?";
}

MatchedCounts matched_counts(const Matching& m, const CompatGraph& g) {
  MatchedCounts c;
  for (const auto& cyc : m.cycles) {
    for (PairId id : cyc.verts) {
      const PairRecord& r = g.records[g.index_of(id)];
      ++c.total;
      if (r.highly_sensitized) ++c.sensitized;
      if (r.critical) ++c.critical;
    }
  }
  return c;
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Per-vertex weights.  The lexicographic chains pack their three 0/1 scores
// into one integer-valued double, (s1*W + s2)*W + s3 with W > max count, so
// summed tuples compare exactly like lexicographic tuples and all arithmetic
// below 2^53 is exact.
std::vector<double> vertex_weights(const CompatGraph& g, const Objective& obj) {
  const double W = static_cast<double>(g.vertex_count()) + 1.0;
  std::vector<double> w(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    const PairRecord& r = g.records[i];
    const double total = 1.0;
    const double sens = r.highly_sensitized ? 1.0 : 0.0;
    const double crit = r.critical ? 1.0 : 0.0;
    double s1, s2, s3;
    switch (obj.kind) {
      case Objective::Kind::MaxCardinality:
        s1 = total; s2 = sens; s3 = crit;
        break;
      case Objective::Kind::Sens:
        s1 = sens; s2 = total; s3 = crit;
        break;
      case Objective::Kind::Time:
        s1 = crit; s2 = total; s3 = sens;
        break;
      case Objective::Kind::CriticalThenSens:
        s1 = crit; s2 = sens; s3 = total;
        break;
      case Objective::Kind::Weighted: {
        if (!obj.weight)
          throw std::invalid_argument("weighted objective needs a weight fn");
        double wv = obj.weight(r);
        if (wv < 0.0)
          throw std::invalid_argument("weighted objective weights must be >= 0");
        w[i] = wv;
        continue;
      }
      default:
        throw std::invalid_argument("unknown objective");
    }
    w[i] = (s1 * W + s2) * W + s3;
  }
  return w;
}

struct PackingProblem {
  std::uint32_t nv = 0;
  std::vector<std::array<std::uint32_t, 3>> cyc;  // [2] == kNone for 2-cycles
  std::vector<double> cyc_w;
  std::vector<double> vert_w;
  std::vector<std::vector<std::uint32_t>> vert_cycles;  // ascending
};

// A cycle's unordered vertex set packed into 21-bit slots (ascending); the
// all-ones pad for 2-cycles sorts above any real index.  Set identity is what
// matters for packing, so the two orientations of a triangle share a key.
constexpr std::uint32_t kSlotMask = 0x1FFFFF;

std::uint64_t set_key(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  if (c == kNone) c = kSlotMask;
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 42) |
         (static_cast<std::uint64_t>(b) << 21) | c;
}

// Cycle-cover relaxation bound.  Dropping the length cap, a packing is a
// permutation that fixes unmatched vertices, so its weight is at most the
// best perfect assignment on the digraph augmented with zero-weight
// self-loops.  The Hungarian potentials of that assignment give per-vertex
// duals d[v] = alpha_v + beta_v with alpha_u + beta_v >= w(v) on every edge
// and d[v] >= 0, hence sum of d over any vertex subset upper-bounds the best
// packing weight inside the subset.  That makes the bound deletion-safe: when
// a vertex leaves the search, subtracting d[v] keeps a valid bound without
// re-solving.  Unlike the plain "sum of coverable weights" bound this one
// sees donor capacity, which is what binds on dense compatibility graphs.
//
// `edges` are directed (u -> v means u's donor can serve v's patient) over
// local indices 0..m-1; `w` holds the per-vertex objective weights.
std::vector<double> cycle_cover_duals(
    std::uint32_t m,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
    const std::vector<double>& w) {
  // Missing edges get a large finite cost; a finite perfect assignment always
  // exists via the diagonal, so they are never selected and only loosen the
  // dual constraints that do not matter.
  const double kBig = 1e13;
  const double kInf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(m);
  std::vector<double> a(static_cast<std::size_t>(n) * n, kBig);
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] = 0.0;
  for (auto [u, v] : edges)
    a[static_cast<std::size_t>(u) * n + v] = -w[v];

  // O(n^3) Hungarian method (shortest augmenting paths with potentials) on
  // the minimisation form; pu/pv stay dual-feasible throughout.
  std::vector<double> pu(n + 1, 0.0), pv(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      const double* row = &a[static_cast<std::size_t>(i0 - 1) * n];
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          pu[p[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  // Translate to maximisation duals and repair any floating-point slack so
  // validity of the bound never depends on exact arithmetic.  With the
  // integer-packed lexicographic weights the violation is exactly zero.
  std::vector<double> d(m);
  double viol = 0.0;
  for (auto [u, v] : edges)
    viol = std::max(viol, w[v] - (-pu[u + 1] - pv[v + 1]));
  for (std::uint32_t v = 0; v < m; ++v)
    viol = std::max(viol, -(-pu[v + 1] - pv[v + 1]));
  for (std::uint32_t v = 0; v < m; ++v)
    d[v] = -pu[v + 1] - pv[v + 1] + viol;
  return d;
}

// Exact search over one component in collapsed twin-class space.
//
// Free twins are fully interchangeable: per class, any permutation of members
// maps every cycle's vertex set to a cycle's vertex set and preserves weights.
// A solution is therefore determined, up to symmetry, by how many instances of
// each distinct class multiset it uses, and the component reduces to a small
// capacitated integer program: variables = multiplicities per catalog entry
// (a class multiset realised by at least one cycle), constraints = per-class
// member counts.  Blood-type driven pools collapse a ~60-vertex component with
// thousands of cycles to ~30 classes and a few hundred entries, and the
// plateau of symmetric alternatives that defeats vertex-level search becomes a
// single state here.
//
// Enumeration is canonical and duplicate-free: branch on the first class with
// remaining capacity; picks for the same branch class go in ascending catalog
// order (repeats allowed), and the alternative branch retires the class
// entirely.  Any feasible multiset is reached by exactly one surviving
// sequence (its picks grouped by branch class, ascending), so first strict
// improvement under this order is the canonical optimum.  Bounds: per-class
// counting, plus a Lagrangian using class multipliers where each entry may
// fire up to its remaining multiplicity.
class ClassSolver {
 public:
  ClassSolver(const PackingProblem& p,
              const std::vector<std::uint32_t>& comp_cycles,
              const std::vector<std::vector<std::uint32_t>>& class_members,
              const std::vector<std::uint32_t>& vclass)
      : p_(p),
        cycles_(comp_cycles),
        members_(class_members),
        nclass_(static_cast<std::uint32_t>(class_members.size())) {
    caps_.resize(nclass_);
    wclass_.resize(nclass_);
    lam_.assign(nclass_, 0.0);
    for (std::uint32_t k = 0; k < nclass_; ++k) {
      caps_[k] = static_cast<std::uint32_t>(members_[k].size());
      wclass_[k] = p_.vert_w[members_[k][0]];
    }

    // Catalog of distinct class multisets, deduplicated by sorted key.
    std::unordered_map<std::uint64_t, std::uint32_t> emap;
    emap.reserve(cycles_.size() * 2);
    for (std::uint32_t ci : cycles_) {
      const auto& vs = p_.cyc[ci];
      std::array<std::uint32_t, 3> t{
          vclass[vs[0]], vclass[vs[1]],
          vs[2] == kNone ? kNone : vclass[vs[2]]};
      std::sort(t.begin(), t.end());  // kNone sorts last
      const std::uint64_t key = set_key(t[0], t[1], t[2]);
      if (!emap.emplace(key, 0).second) continue;
      Entry e;
      e.key = key;
      e.w = p_.cyc_w[ci];
      for (std::uint32_t x : t) {
        if (x == kNone) break;
        if (e.ndist > 0 && e.cls[e.ndist - 1] == x) {
          ++e.uses[e.ndist - 1];
        } else {
          e.cls[e.ndist] = x;
          e.uses[e.ndist] = 1;
          ++e.ndist;
        }
      }
      catalog_.push_back(e);
    }
    std::stable_sort(catalog_.begin(), catalog_.end(),
                     [](const Entry& a, const Entry& b) {
                       if (a.w != b.w) return a.w > b.w;
                       return a.key < b.key;
                     });
    perclass_.assign(nclass_, {});
    for (std::uint32_t ei = 0; ei < catalog_.size(); ++ei)
      for (std::uint8_t d = 0; d < catalog_[ei].ndist; ++d)
        perclass_[catalog_[ei].cls[d]].push_back(ei);
  }

  // Branch and bound over canonical multisets: start from the best of the
  // weight-greedy, rounded-LP, and LP-dive incumbents (polished by exchange
  // search), prune with the re-optimized node LP, and stop as soon as a
  // solution matches the root LP's floor (scores are integers, so that floor
  // certifies optimality).
  //
  // Returns true when the search ran to a certificate; false when the node
  // budget interrupted it (budget 0 = unlimited).  Calls are re-entrant:
  // setup and any incumbent improvements persist, so a later call with a
  // larger budget resumes from a stronger position.
  bool solve(std::uint64_t budget) {
    budget_ = budget == 0 ? std::numeric_limits<std::uint64_t>::max()
                          : nodes_ + budget;
    aborted_ = false;
    if (solved_) return true;
    if (!prepared_) {
      prepared_ = true;
      seed_greedy();
      double lin = 0.0;
      for (std::uint32_t k = 0; k < nclass_; ++k) lin += caps_[k] * wclass_[k];
      need_search_ = lin > best_;
      if (need_search_) {
        tune_multipliers();
        lp_rounding_incumbent();
        lp_dive_incumbent();
        local_search();
        target_stop_ = std::floor(std::min(lin, root_lagr_) + 1e-6);
        need_search_ = best_ < target_stop_ - 0.5;
      }
    }
    if (need_search_) {
      stop_ = false;
      rec(0, 0, 0);
      if (aborted_) return false;
    }
    solved_ = true;
    return true;
  }

  // Chosen cycle indices for the incumbent (ascending not guaranteed; the
  // caller sorts).  Exact after solve() returned true.
  std::vector<std::uint32_t> result() const { return expand(); }

 private:
  struct Entry {
    std::array<std::uint32_t, 3> cls{kNone, kNone, kNone};
    std::array<std::uint8_t, 3> uses{0, 0, 0};
    std::uint8_t ndist = 0;
    double w = 0.0;
    std::uint64_t key = 0;
  };

  std::uint32_t max_mult(const Entry& e) const {
    std::uint32_t m = std::numeric_limits<std::uint32_t>::max();
    for (std::uint8_t d = 0; d < e.ndist; ++d)
      m = std::min(m, caps_[e.cls[d]] / e.uses[d]);
    return m;
  }

  void seed_greedy() {
    std::vector<std::uint32_t> caps = caps_;
    double score = 0.0;
    std::vector<std::uint32_t> taken;
    for (std::uint32_t ei = 0; ei < catalog_.size(); ++ei) {
      const Entry& e = catalog_[ei];
      for (;;) {
        bool fit = true;
        for (std::uint8_t d = 0; d < e.ndist; ++d)
          if (caps[e.cls[d]] < e.uses[d]) {
            fit = false;
            break;
          }
        if (!fit) break;
        for (std::uint8_t d = 0; d < e.ndist; ++d) caps[e.cls[d]] -= e.uses[d];
        taken.push_back(ei);
        score += e.w;
      }
    }
    best_ = score;
    best_choice_ = std::move(taken);
  }

  // Exact LP duals for the class relaxation
  //   max sum w_E x_E   s.t.  per class: sum uses_E x_E <= caps,  x >= 0
  // via a revised primal simplex (slack start, Bland's rule, explicit basis
  // inverse — the basis is only nclass_ wide).  Optimal duals price every
  // entry out (all slacks <= 0 up to roundoff), so the node bound collapses
  // to the priced capacities; any roundoff tails are kept as positive slacks,
  // which preserves validity of the bound unconditionally.
  void tune_multipliers() {
    const std::size_t ne = catalog_.size();
    std::vector<double> mult(ne);
    for (std::size_t ei = 0; ei < ne; ++ei)
      mult[ei] = static_cast<double>(max_mult(catalog_[ei]));

    const std::uint32_t kk = nclass_;
    const std::size_t ncols = ne + kk;
    std::vector<double> binv(static_cast<std::size_t>(kk) * kk, 0.0);
    std::vector<double> bhat(kk), y(kk, 0.0), dir(kk);
    std::vector<std::uint32_t> basis(kk);
    std::vector<char> basic(ncols, 0);
    for (std::uint32_t i = 0; i < kk; ++i) {
      basis[i] = static_cast<std::uint32_t>(ne) + i;
      basic[ne + i] = 1;
      binv[static_cast<std::size_t>(i) * kk + i] = 1.0;
      bhat[i] = static_cast<double>(caps_[i]);
    }
    const double kEps = 1e-7;
    for (int pivots = 0; pivots < 20000; ++pivots) {
      for (std::uint32_t r = 0; r < kk; ++r) {
        double s = 0.0;
        for (std::uint32_t i = 0; i < kk; ++i) {
          const std::uint32_t bj = basis[i];
          if (bj < ne)
            s += catalog_[bj].w * binv[static_cast<std::size_t>(i) * kk + r];
        }
        y[r] = s;
      }
      std::size_t enter = ncols;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (basic[j]) continue;
        double rc;
        if (j < ne) {
          const Entry& e = catalog_[j];
          rc = e.w;
          for (std::uint8_t d = 0; d < e.ndist; ++d)
            rc -= e.uses[d] * y[e.cls[d]];
        } else {
          rc = -y[j - ne];
        }
        if (rc > kEps) {
          enter = j;
          break;
        }
      }
      if (enter == ncols) break;
      for (std::uint32_t i = 0; i < kk; ++i) {
        double s = 0.0;
        if (enter < ne) {
          const Entry& e = catalog_[enter];
          for (std::uint8_t d = 0; d < e.ndist; ++d)
            s += e.uses[d] *
                 binv[static_cast<std::size_t>(i) * kk + e.cls[d]];
        } else {
          s = binv[static_cast<std::size_t>(i) * kk + (enter - ne)];
        }
        dir[i] = s;
      }
      std::uint32_t leave = kk;
      double best_ratio = 0.0;
      for (std::uint32_t i = 0; i < kk; ++i) {
        if (dir[i] <= kEps) continue;
        const double ratio = bhat[i] / dir[i];
        if (leave == kk || ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == kk) break;  // cannot happen: capacities bound the LP
      const double piv = dir[leave];
      double* lrow = &binv[static_cast<std::size_t>(leave) * kk];
      for (std::uint32_t r = 0; r < kk; ++r) lrow[r] /= piv;
      bhat[leave] /= piv;
      for (std::uint32_t i = 0; i < kk; ++i) {
        if (i == leave || dir[i] == 0.0) continue;
        const double f = dir[i];
        double* row = &binv[static_cast<std::size_t>(i) * kk];
        for (std::uint32_t r = 0; r < kk; ++r) row[r] -= f * lrow[r];
        bhat[i] -= f * bhat[leave];
      }
      basic[basis[leave]] = 0;
      basic[enter] = 1;
      basis[leave] = static_cast<std::uint32_t>(enter);
    }
    for (std::uint32_t k = 0; k < kk; ++k) lam_[k] = std::max(0.0, y[k]);

    // Primal solution off the final basis: the LP's plan for which entries to
    // use and how often.
    xstar_.assign(ne, 0.0);
    for (std::uint32_t i = 0; i < kk; ++i)
      if (basis[i] < ne) xstar_[basis[i]] = std::max(0.0, bhat[i]);

    // Keep the optimal basis for per-node re-pricing: reduced costs are
    // independent of the right-hand side, so this basis stays dual feasible
    // for every descendant's capacity vector and each node LP re-optimizes in
    // a handful of dual pivots.
    root_binv_ = binv;
    root_basis_ = basis;

    root_lagr_ = 0.0;
    for (std::uint32_t k = 0; k < nclass_; ++k)
      root_lagr_ += caps_[k] * lam_[k];
    for (std::size_t ei = 0; ei < ne; ++ei) {
      const Entry& e = catalog_[ei];
      double s = e.w;
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        s -= e.uses[d] * lam_[e.cls[d]];
      if (s > 0.0) root_lagr_ += mult[ei] * s;
    }
    slack_.resize(ne);
    root_slack_plus_ = 0.0;
    for (std::size_t ei = 0; ei < ne; ++ei) {
      const Entry& e = catalog_[ei];
      double s = e.w;
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        s -= e.uses[d] * lam_[e.cls[d]];
      // Same rounding guard as the vertex-level bound; exact-zero for the
      // integer-packed chains.
      slack_[ei] = s + 1e-9;
      if (slack_[ei] > 0.0) {
        const std::uint32_t m = max_mult(e);
        if (m > 0) root_slack_plus_ += m * slack_[ei];
      }
    }

    // Re-rank the catalog so picks follow the LP's plan: support entries in
    // descending fractional value first, then by weight.  The first dive then
    // walks the optimal face instead of wandering, and any fixed total order
    // keeps the enumeration duplicate-free.
    std::vector<std::uint32_t> perm(ne);
    for (std::size_t ei = 0; ei < ne; ++ei)
      perm[ei] = static_cast<std::uint32_t>(ei);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double xa = xstar_[a] > 1e-9 ? xstar_[a] : 0.0;
                       const double xb = xstar_[b] > 1e-9 ? xstar_[b] : 0.0;
                       if (xa != xb) return xa > xb;
                       if (catalog_[a].w != catalog_[b].w)
                         return catalog_[a].w > catalog_[b].w;
                       return catalog_[a].key < catalog_[b].key;
                     });
    std::vector<Entry> cat2(ne);
    std::vector<double> sl2(ne), xs2(ne);
    std::vector<std::uint32_t> inv(ne);
    for (std::size_t i = 0; i < ne; ++i) {
      cat2[i] = catalog_[perm[i]];
      sl2[i] = slack_[perm[i]];
      xs2[i] = xstar_[perm[i]];
      inv[perm[i]] = static_cast<std::uint32_t>(i);
    }
    catalog_ = std::move(cat2);
    slack_ = std::move(sl2);
    xstar_ = std::move(xs2);
    for (std::uint32_t& ei : best_choice_) ei = inv[ei];
    for (std::uint32_t& bj : root_basis_)
      if (bj < ne) bj = inv[bj];
    perclass_.assign(nclass_, {});
    for (std::uint32_t ei = 0; ei < ne; ++ei)
      for (std::uint8_t d = 0; d < catalog_[ei].ndist; ++d)
        perclass_[catalog_[ei].cls[d]].push_back(ei);

    // Weight-descending pick order shared by the incumbent heuristics.
    worder_.resize(ne);
    for (std::size_t i = 0; i < ne; ++i)
      worder_[i] = static_cast<std::uint32_t>(i);
    std::stable_sort(worder_.begin(), worder_.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       if (catalog_[a].w != catalog_[b].w)
                         return catalog_[a].w > catalog_[b].w;
                       return catalog_[a].key < catalog_[b].key;
                     });
  }

  // Round the LP plan down to an integer packing and complete greedily by
  // weight; replaces the weight-greedy incumbent when it scores higher.
  void lp_rounding_incumbent() {
    const std::size_t ne = catalog_.size();
    std::vector<std::uint32_t> caps = caps_;
    std::vector<std::uint32_t> taken;
    double score = 0.0;
    auto try_take = [&](std::uint32_t ei) {
      const Entry& e = catalog_[ei];
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        if (caps[e.cls[d]] < e.uses[d]) return false;
      for (std::uint8_t d = 0; d < e.ndist; ++d) caps[e.cls[d]] -= e.uses[d];
      taken.push_back(ei);
      score += e.w;
      return true;
    };
    for (std::uint32_t ei = 0; ei < ne; ++ei) {
      double want = std::floor(xstar_[ei] + 1e-6);
      while (want > 0.0 && try_take(ei)) want -= 1.0;
    }
    for (std::uint32_t ei : worder_)
      while (try_take(ei)) {
      }
    if (score > best_) {
      best_ = score;
      best_choice_ = std::move(taken);
    }
  }

  // LP dive: re-solve the relaxation on the remaining capacities, round the
  // most fractional plan entry up, repeat until the plan is integral or a
  // round-up no longer fits, then complete greedily.  Re-planning after each
  // fix tracks the optimal face far better than one-shot rounding when the
  // simplex lands on a fractional optimum.
  void lp_dive_incumbent() {
    const std::size_t ne = catalog_.size();
    std::vector<std::uint32_t> caps = caps_;
    std::vector<std::uint32_t> taken;
    double score = 0.0;
    auto take_fits = [&](std::uint32_t ei) {
      const Entry& e = catalog_[ei];
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        if (caps[e.cls[d]] < e.uses[d]) return false;
      for (std::uint8_t d = 0; d < e.ndist; ++d) caps[e.cls[d]] -= e.uses[d];
      taken.push_back(ei);
      score += e.w;
      return true;
    };
    for (;;) {
      if (lp_bound_on(0, caps) == std::numeric_limits<double>::infinity())
        break;  // pivot cap: keep what the dive has so far
      std::uint32_t up = kNone;
      double updist = 1e-6;
      for (std::uint32_t i = 0; i < nclass_; ++i) {
        const std::uint32_t bj = lpb_basis_[i];
        if (bj >= ne || lpb_bhat_[i] < 1e-9) continue;
        const double frac = lpb_bhat_[i] - std::floor(lpb_bhat_[i]);
        const double dist = frac < 1.0 - frac ? frac : 1.0 - frac;
        if (dist > updist) {
          updist = dist;
          up = bj;
        }
      }
      if (up == kNone) {
        // Integral plan: realize it wholesale.
        for (std::uint32_t i = 0; i < nclass_; ++i) {
          const std::uint32_t bj = lpb_basis_[i];
          if (bj >= ne) continue;
          double t = std::floor(lpb_bhat_[i] + 0.5);
          while (t >= 1.0 && take_fits(bj)) t -= 1.0;
        }
        break;
      }
      if (!take_fits(up)) break;
    }
    for (std::uint32_t ei : worder_)
      while (take_fits(ei)) {
      }
    if (score > best_) {
      best_ = score;
      best_choice_ = std::move(taken);
    }
  }

  // One- and two-drop exchange search on the incumbent: remove chosen
  // instances, refill greedily by weight, keep strict improvements.  The
  // choice list is a multiset, so order never matters to the expansion.
  void local_search() {
    if (best_choice_.empty()) return;
    std::vector<std::uint32_t> caps, adds;
    auto caps_without = [&](std::size_t skip1, std::size_t skip2) {
      caps = caps_;
      for (std::size_t i = 0; i < best_choice_.size(); ++i) {
        if (i == skip1 || i == skip2) continue;
        const Entry& e = catalog_[best_choice_[i]];
        for (std::uint8_t d = 0; d < e.ndist; ++d)
          caps[e.cls[d]] -= e.uses[d];
      }
    };
    auto refill = [&]() {
      double g = 0.0;
      adds.clear();
      for (std::uint32_t ei : worder_) {
        const Entry& e = catalog_[ei];
        for (;;) {
          bool fit = true;
          for (std::uint8_t d = 0; d < e.ndist; ++d)
            if (caps[e.cls[d]] < e.uses[d]) {
              fit = false;
              break;
            }
          if (!fit) break;
          for (std::uint8_t d = 0; d < e.ndist; ++d)
            caps[e.cls[d]] -= e.uses[d];
          adds.push_back(ei);
          g += e.w;
        }
      }
      return g;
    };
    auto accept = [&](std::size_t i, std::size_t j, double gain) {
      best_ += gain;
      if (j < best_choice_.size())
        best_choice_.erase(best_choice_.begin() +
                           static_cast<std::ptrdiff_t>(j));
      best_choice_.erase(best_choice_.begin() + static_cast<std::ptrdiff_t>(i));
      best_choice_.insert(best_choice_.end(), adds.begin(), adds.end());
    };
    for (int round = 0; round < 40; ++round) {
      bool improved = false;
      for (std::size_t i = 0; i < best_choice_.size() && !improved; ++i) {
        caps_without(i, i);
        const double g = refill() - catalog_[best_choice_[i]].w;
        if (g >= 0.5) {
          accept(i, best_choice_.size(), g);
          improved = true;
        }
      }
      if (!improved) {
        for (std::size_t i = 0; i + 1 < best_choice_.size() && !improved; ++i)
          for (std::size_t j = i + 1; j < best_choice_.size() && !improved;
               ++j) {
            caps_without(i, j);
            const double g = refill() - catalog_[best_choice_[i]].w -
                             catalog_[best_choice_[j]].w;
            if (g >= 0.5) {
              accept(i, j, g);
              improved = true;
            }
          }
      }
      if (!improved) break;
    }
  }

  // min(counting, Lagrangian) on the remaining capacities.  Positive slacks
  // are roundoff tails of the optimal pricing; their root total is a valid
  // (and vanishing) overestimate of any descendant's, keeping this O(classes).
  double node_bound() const {
    double lin = 0.0, lag = root_slack_plus_;
    for (std::uint32_t k = 0; k < nclass_; ++k) {
      if (caps_[k] == 0) continue;
      lin += caps_[k] * wclass_[k];
      lag += caps_[k] * lam_[k];
    }
    return lin < lag ? lin : lag;
  }

  // Exact LP value of the class relaxation on the remaining capacities.
  // Reduced costs never involve the right-hand side, so any previously
  // optimal basis stays dual feasible for every descendant; re-optimizing is
  // a handful of dual-simplex pivots against the new capacities.  Each level
  // warm-starts from its parent's final basis (level 0 from the root solve),
  // which keeps the typical pivot count per node near zero.  Basic columns
  // never enter the ratio test (their tableau row entry is 0 or 1), so no
  // basic flags are kept.  Returns +inf on the pivot cap, which the caller
  // treats as "no extra pruning".
  double lp_bound(std::size_t level) { return lp_bound_on(level, caps_); }

  double lp_bound_on(std::size_t level, const std::vector<std::uint32_t>& rhs) {
    const std::size_t ne = catalog_.size();
    const std::uint32_t kk = nclass_;
    if (lps_binv_.size() <= level) {
      lps_binv_.resize(level + 1);
      lps_basis_.resize(level + 1);
    }
    if (level == 0 || lps_basis_[level - 1].empty()) {
      lpb_binv_ = root_binv_;
      lpb_basis_ = root_basis_;
    } else {
      lpb_binv_ = lps_binv_[level - 1];
      lpb_basis_ = lps_basis_[level - 1];
    }
    lpb_bhat_.resize(kk);
    lpb_y_.resize(kk);
    lpb_dir_.resize(kk);
    auto bi = [&](std::uint32_t i, std::uint32_t r) -> double& {
      return lpb_binv_[static_cast<std::size_t>(i) * kk + r];
    };
    for (std::uint32_t i = 0; i < kk; ++i) {
      double s = 0.0;
      for (std::uint32_t r = 0; r < kk; ++r) s += bi(i, r) * rhs[r];
      lpb_bhat_[i] = s;
    }
    const double kEps = 1e-7;
    for (int pivots = 0; pivots < 300; ++pivots) {
      std::uint32_t lv = kk;
      double worst = -1e-9;
      for (std::uint32_t i = 0; i < kk; ++i)
        if (lpb_bhat_[i] < worst) {
          worst = lpb_bhat_[i];
          lv = i;
        }
      if (lv == kk) {
        double v = 0.0;
        for (std::uint32_t i = 0; i < kk; ++i)
          if (lpb_basis_[i] < ne)
            v += catalog_[lpb_basis_[i]].w * lpb_bhat_[i];
        lp_pivots_ += static_cast<std::uint64_t>(pivots);
        lps_binv_[level] = lpb_binv_;
        lps_basis_[level] = lpb_basis_;
        return v;
      }
      for (std::uint32_t r = 0; r < kk; ++r) {
        double s = 0.0;
        for (std::uint32_t i = 0; i < kk; ++i)
          if (lpb_basis_[i] < ne) s += catalog_[lpb_basis_[i]].w * bi(i, r);
        lpb_y_[r] = s;
      }
      std::size_t enter = ne + kk;
      double best_ratio = 0.0;
      auto consider = [&](std::size_t j, double alpha, double rc) {
        if (rc > 0.0) rc = 0.0;
        const double ratio = rc / alpha;
        if (enter == ne + kk || ratio < best_ratio - 1e-12) {
          enter = j;
          best_ratio = ratio;
        }
      };
      for (std::size_t j = 0; j < ne; ++j) {
        const Entry& e = catalog_[j];
        double alpha = 0.0;
        for (std::uint8_t d = 0; d < e.ndist; ++d)
          alpha += e.uses[d] * bi(lv, e.cls[d]);
        if (alpha >= -kEps) continue;
        double rc = e.w;
        for (std::uint8_t d = 0; d < e.ndist; ++d)
          rc -= e.uses[d] * lpb_y_[e.cls[d]];
        consider(j, alpha, rc);
      }
      for (std::uint32_t k2 = 0; k2 < kk; ++k2)
        if (bi(lv, k2) < -kEps) consider(ne + k2, bi(lv, k2), -lpb_y_[k2]);
      if (enter == ne + kk) break;  // cannot happen: x = 0 is feasible
      for (std::uint32_t i = 0; i < kk; ++i) {
        double s = 0.0;
        if (enter < ne) {
          const Entry& e = catalog_[enter];
          for (std::uint8_t d = 0; d < e.ndist; ++d)
            s += e.uses[d] * bi(i, e.cls[d]);
        } else {
          s = bi(i, static_cast<std::uint32_t>(enter - ne));
        }
        lpb_dir_[i] = s;
      }
      const double piv = lpb_dir_[lv];
      double* lrow = &lpb_binv_[static_cast<std::size_t>(lv) * kk];
      for (std::uint32_t r = 0; r < kk; ++r) lrow[r] /= piv;
      lpb_bhat_[lv] /= piv;
      for (std::uint32_t i = 0; i < kk; ++i) {
        if (i == lv || lpb_dir_[i] == 0.0) continue;
        const double f = lpb_dir_[i];
        double* row = &lpb_binv_[static_cast<std::size_t>(i) * kk];
        for (std::uint32_t r = 0; r < kk; ++r) row[r] -= f * lrow[r];
        lpb_bhat_[i] -= f * lpb_bhat_[lv];
      }
      lpb_basis_[lv] = static_cast<std::uint32_t>(enter);
    }
    ++lp_capped_;
    lps_basis_[level].clear();
    return std::numeric_limits<double>::infinity();
  }

  void rec(std::uint32_t kmin, std::uint32_t idxmin, std::size_t level) {
    if (stop_ || aborted_) return;
    ++nodes_;
    if (nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    std::uint32_t k = kmin;
    while (k < nclass_ && caps_[k] == 0) ++k;
    if (k != kmin) idxmin = 0;
    if (k == nclass_) {
      if (current_ > best_) {
        best_ = current_;
        best_choice_ = chosen_;
        // A solution matching the root bound's floor is certifiably optimal;
        // skip the remaining unwind.
        if (best_ >= target_stop_ - 0.5) stop_ = true;
      }
      return;
    }
    // Scores are integer-valued, so any improvement is >= best + 1; pruning
    // at best + 1/2 is exact and immune to the bound's rounding guards.
    if (current_ + node_bound() <= best_ + 0.5) return;
    ++lp_calls_;
    if (current_ + std::floor(lp_bound(level) + 1e-6) <= best_ + 0.5) return;

    for (std::uint32_t ei : perclass_[k]) {
      if (ei < idxmin) continue;
      // Root reduced cost: any solution using this entry scores at most root
      // bound + slack, so deeply priced-out entries retire as the incumbent
      // rises.
      if (root_lagr_ + slack_[ei] <= best_ + 0.5) continue;
      const Entry& e = catalog_[ei];
      bool fit = true;
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        if (caps_[e.cls[d]] < e.uses[d]) {
          fit = false;
          break;
        }
      if (!fit) continue;
      for (std::uint8_t d = 0; d < e.ndist; ++d) caps_[e.cls[d]] -= e.uses[d];
      chosen_.push_back(ei);
      current_ += e.w;
      rec(k, ei, level + 1);
      current_ -= e.w;
      chosen_.pop_back();
      for (std::uint8_t d = 0; d < e.ndist; ++d) caps_[e.cls[d]] += e.uses[d];
    }
    const std::uint32_t saved = caps_[k];
    caps_[k] = 0;
    rec(k + 1, 0, level + 1);
    caps_[k] = saved;
  }

  // Realise the winning multiset with concrete vertices: members are consumed
  // in ascending id order per class, and each instance's vertex set is looked
  // up among the enumerated cycles (the twin symmetry guarantees it exists).
  std::vector<std::uint32_t> expand() const {
    std::unordered_map<std::uint64_t, std::uint32_t> byset;
    byset.reserve(cycles_.size() * 2);
    for (std::uint32_t ci : cycles_) {
      const auto& vs = p_.cyc[ci];
      byset.emplace(set_key(vs[0], vs[1], vs[2]), ci);
    }
    std::vector<std::uint32_t> pos(nclass_, 0);
    std::vector<std::uint32_t> out;
    out.reserve(best_choice_.size());
    for (std::uint32_t ei : best_choice_) {
      const Entry& e = catalog_[ei];
      std::array<std::uint32_t, 3> got{kNone, kNone, kNone};
      int n = 0;
      for (std::uint8_t d = 0; d < e.ndist; ++d)
        for (std::uint8_t u = 0; u < e.uses[d]; ++u)
          got[n++] = members_[e.cls[d]][pos[e.cls[d]]++];
      out.push_back(byset.at(set_key(got[0], got[1], got[2])));
    }
    return out;
  }

  const PackingProblem& p_;
  const std::vector<std::uint32_t>& cycles_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::uint32_t nclass_;
  std::vector<std::uint32_t> caps_;
  std::vector<double> wclass_;
  std::vector<double> lam_;
  std::vector<double> slack_;
  std::vector<double> xstar_;
  std::vector<Entry> catalog_;
  std::vector<std::vector<std::uint32_t>> perclass_;
  std::vector<std::uint32_t> worder_;
  std::vector<std::uint32_t> chosen_;
  std::vector<double> root_binv_;
  std::vector<std::uint32_t> root_basis_;
  std::vector<double> lpb_binv_, lpb_bhat_, lpb_y_, lpb_dir_;
  std::vector<std::uint32_t> lpb_basis_;
  std::vector<std::vector<double>> lps_binv_;
  std::vector<std::vector<std::uint32_t>> lps_basis_;
  double current_ = 0.0;
  double root_lagr_ = 0.0;
  double root_slack_plus_ = 0.0;
  double target_stop_ = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_ = 0;
  std::uint64_t budget_ = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t lp_calls_ = 0, lp_pivots_ = 0, lp_capped_ = 0;
  double best_ = 0.0;
  bool stop_ = false;
  bool aborted_ = false;
  bool prepared_ = false;
  bool solved_ = false;
  bool need_search_ = false;
  std::vector<std::uint32_t> best_choice_;
};

// Exact branch and bound on one connected component of the cycle hypergraph.
//
// Two vertices are twins when they carry the same objective weight and
// swapping them maps every cycle's vertex set to some cycle's vertex set, so
// the swap is a weight-preserving symmetry of the packing problem.  Blood-type
// driven instances are full of twins, and treating them as interchangeable is
// what keeps dense pools tractable: sibling branches that differ only by a
// twin swap are explored once, and declining to match a vertex declines its
// whole free twin class (any solution matching a twin instead maps to one
// already explored).  Both prunings preserve exact optimality.
//
// Search order is fully deterministic: branch vertex = fewest alive cycles
// (ties: smallest index), include-branches by descending cycle weight (ties:
// ascending enumeration order) before the leave-unmatched branch, and only
// strict improvements replace the incumbent — so the reported optimum is the
// first one reached by this fixed search order.
class ComponentSolver {
 public:
  ComponentSolver(const PackingProblem& p,
                  std::vector<std::uint32_t> comp_verts,
                  std::vector<std::uint32_t> comp_cycles,
                  const std::unordered_set<std::uint64_t>* cycle_keys)
      : p_(p),
        verts_(std::move(comp_verts)),
        cycles_(std::move(comp_cycles)),
        keys_(cycle_keys),
        cyc_dead_(p.cyc.size(), 0),
        vert_state_(p.nv, kFree),
        avail_(p.nv, 0),
        lam_(p.nv, 0.0),
        slack_(p.cyc.size(), 0.0) {
    for (std::uint32_t v : verts_) {
      avail_[v] = static_cast<std::uint32_t>(p_.vert_cycles[v].size());
      if (avail_[v] > 0) coverable_ += p_.vert_w[v];
    }
  }

  std::vector<std::uint32_t> solve() {
    seed_greedy();
    // The counting bound alone often certifies the greedy incumbent (small or
    // loosely connected components); only otherwise pay for the relaxation
    // and symmetry analysis.
    if (current_ + coverable_ > best_) {
      std::vector<double> duals = hungarian_duals();
      compute_classes();
      // Two exact engines with complementary strengths: the vertex-level
      // dichotomy excels when its probe walks straight to the optimum, the
      // collapsed twin-class search when the symmetric plateau needs
      // wholesale retirement.  Neither wins on every pool, so alternate
      // budgeted attempts with geometrically growing budgets; the answer is
      // exact as soon as either completes, and the escalation guarantees one
      // eventually does.
      const bool class_ok = keys_ != nullptr && verts_.size() >= 12 &&
                            10 * class_members_.size() <= 7 * verts_.size() &&
                            std::getenv("KEXSIM_NO_CLASS_SOLVER") == nullptr;
      tune_vertex_multipliers(std::move(duals));
      if (std::getenv("KEXSIM_SOLVER_DEBUG")) {
        std::fprintf(stderr,
                     "[solver] comp verts=%zu cycles=%zu classes=%zu "
                     "greedy=%.0f coverable=%.0f lagr=%.0f\n",
                     verts_.size(), cycles_.size(), class_members_.size(),
                     best_, coverable_, lam_sum_ + slack_sum_);
      }
      std::optional<ClassSolver> cs;
      std::uint64_t vbudget = class_ok ? 1u << 16 : 0;
      std::uint64_t cbudget = 1u << 14;
      for (;;) {
        if (vertex_ladder(vbudget)) break;
        if (!cs) cs.emplace(p_, cycles_, class_members_, vclass_);
        if (cs->solve(cbudget)) {
          best_set_ = cs->result();
          break;
        }
        vbudget *= 4;
        cbudget *= 4;
      }
    }
    std::sort(best_set_.begin(), best_set_.end());
    return best_set_;
  }

 private:
  static constexpr std::uint8_t kFree = 0, kCovered = 1, kExcluded = 2;
  enum class Op : std::uint8_t { KillCycle, AvailDec, SetState };
  struct TrailEntry {
    Op op;
    std::uint8_t old_state;
    std::uint32_t idx;
  };

  const std::array<std::uint32_t, 3>& cyc_verts(std::uint32_t c) const {
    return p_.cyc[c];
  }

  void kill_cycle(std::uint32_t c) {
    if (cyc_dead_[c]) return;
    cyc_dead_[c] = 1;
    slack_sum_ -= slack_[c];
    trail_.push_back({Op::KillCycle, 0, c});
    for (std::uint32_t v : cyc_verts(c)) {
      if (v == kNone) break;
      trail_.push_back({Op::AvailDec, 0, v});
      if (--avail_[v] == 0 && vert_state_[v] == kFree) {
        coverable_ -= p_.vert_w[v];
        lam_sum_ -= lam_[v];
      }
    }
  }

  void set_state(std::uint32_t v, std::uint8_t s) {
    trail_.push_back({Op::SetState, vert_state_[v], v});
    if (vert_state_[v] == kFree && avail_[v] > 0) {
      coverable_ -= p_.vert_w[v];
      lam_sum_ -= lam_[v];
    }
    vert_state_[v] = s;
  }

  void choose_cycle(std::uint32_t c) {
    current_ += p_.cyc_w[c];
    for (std::uint32_t v : cyc_verts(c)) {
      if (v == kNone) break;
      set_state(v, kCovered);
    }
    for (std::uint32_t v : cyc_verts(c)) {
      if (v == kNone) break;
      for (std::uint32_t c2 : p_.vert_cycles[v]) kill_cycle(c2);
    }
  }

  void exclude_vertex(std::uint32_t v) {
    set_state(v, kExcluded);
    for (std::uint32_t c : p_.vert_cycles[v]) kill_cycle(c);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      TrailEntry e = trail_.back();
      trail_.pop_back();
      switch (e.op) {
        case Op::KillCycle:
          cyc_dead_[e.idx] = 0;
          slack_sum_ += slack_[e.idx];
          break;
        case Op::AvailDec:
          if (++avail_[e.idx] == 1 && vert_state_[e.idx] == kFree) {
            coverable_ += p_.vert_w[e.idx];
            lam_sum_ += lam_[e.idx];
          }
          break;
        case Op::SetState:
          if (e.old_state == kFree && avail_[e.idx] > 0) {
            coverable_ += p_.vert_w[e.idx];
            lam_sum_ += lam_[e.idx];
          }
          vert_state_[e.idx] = e.old_state;
          break;
      }
    }
  }

  // Deletion-safe per-vertex duals from the cycle-cover relaxation, aligned
  // with verts_.  They seed the Lagrangian machinery of both search modes.
  std::vector<double> hungarian_duals() {
    const std::uint32_t m = static_cast<std::uint32_t>(verts_.size());
    std::vector<std::uint32_t> local_of(p_.nv, kNone);
    for (std::uint32_t i = 0; i < m; ++i) local_of[verts_[i]] = i;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(cycles_.size() * 3);
    for (std::uint32_t c : cycles_) {
      const auto& vs = cyc_verts(c);
      const std::uint32_t a = local_of[vs[0]], b = local_of[vs[1]];
      if (vs[2] == kNone) {
        edges.emplace_back(a, b);
        edges.emplace_back(b, a);
      } else {
        const std::uint32_t cc = local_of[vs[2]];
        edges.emplace_back(a, b);
        edges.emplace_back(b, cc);
        edges.emplace_back(cc, a);
      }
    }

    std::vector<double> w(m);
    for (std::uint32_t i = 0; i < m; ++i) w[i] = p_.vert_w[verts_[i]];
    return cycle_cover_duals(m, edges, w);
  }

  // Per-vertex Lagrangian multipliers for the packing constraints.  Any
  // lam >= 0 gives the valid bound
  //   sum of lam over free vertices + sum over alive cycles of
  //   slack(c) = max(0, w(c) - sum of lam over c's vertices),
  // and both sums are O(1) to maintain as the search fixes vertices and kills
  // cycles.  Seeding lam with the cycle-cover duals makes the initial bound
  // equal that relaxation; exact coordinate descent then pushes it down
  // toward the fractional packing bound, which also penalises structures the
  // assignment relaxation cannot see (cycles longer than the cap).  Per
  // coordinate the minimiser is closed-form: with a unit capacity the
  // derivative turns non-negative at the second-largest activation threshold
  // among the vertex's cycles.
  void tune_vertex_multipliers(std::vector<double> lam) {
    const std::uint32_t m = static_cast<std::uint32_t>(verts_.size());
    std::vector<std::uint32_t> local_of(p_.nv, kNone);
    for (std::uint32_t i = 0; i < m; ++i) local_of[verts_[i]] = i;

    // Local views of the component's cycles for the descent sweeps.
    const std::uint32_t nc = static_cast<std::uint32_t>(cycles_.size());
    std::vector<std::array<std::uint32_t, 3>> cvs(nc);
    std::vector<double> w(nc);
    std::vector<std::vector<std::uint32_t>> through(m);
    for (std::uint32_t k = 0; k < nc; ++k) {
      const auto& vs = cyc_verts(cycles_[k]);
      cvs[k] = {local_of[vs[0]], local_of[vs[1]],
                vs[2] == kNone ? kNone : local_of[vs[2]]};
      w[k] = p_.cyc_w[cycles_[k]];
      for (std::uint32_t v : cvs[k]) {
        if (v == kNone) break;
        through[v].push_back(k);
      }
    }

    std::vector<double> sum(nc);
    std::vector<double> thr;
    for (int sweep = 0; sweep < 60; ++sweep) {
      for (std::uint32_t k = 0; k < nc; ++k) {
        double s = 0.0;
        for (std::uint32_t v : cvs[k]) {
          if (v == kNone) break;
          s += lam[v];
        }
        sum[k] = s;
      }
      bool changed = false;
      for (std::uint32_t i = 0; i < m; ++i) {
        thr.clear();
        for (std::uint32_t k : through[i]) {
          const double others = w[k] - (sum[k] - lam[i]);
          if (others > 0.0) thr.push_back(others);
        }
        double mu = 0.0;
        if (thr.size() > 1) {
          std::sort(thr.begin(), thr.end());
          mu = thr[thr.size() - 2];
        }
        const double delta = mu - lam[i];
        if (std::abs(delta) > 1e-9) {
          lam[i] = mu;
          changed = true;
          for (std::uint32_t k : through[i]) sum[k] += delta;
        }
      }
      if (!changed) break;
    }

    for (std::uint32_t i = 0; i < m; ++i) lam_[verts_[i]] = lam[i];
    slack_.assign(p_.cyc.size(), 0.0);
    lam_sum_ = 0.0;
    slack_sum_ = 0.0;
    for (std::uint32_t i = 0; i < m; ++i) lam_sum_ += lam[i];
    for (std::uint32_t c : cycles_) {
      double s = p_.cyc_w[c];
      for (std::uint32_t v : cyc_verts(c)) {
        if (v == kNone) break;
        s -= lam_[v];
      }
      // Tiny guard so float rounding can never make the bound understate a
      // cycle's contribution; irrelevant for the integer-packed chains.
      s += 1e-9;
      if (s > 0.0) {
        slack_[c] = s;
        slack_sum_ += s;
      }
    }
  }

  // Any cycle whose reduced cost eats the whole root gap cannot be part of an
  // improving solution; killing it at the root shrinks the search problem.
  // Deletions lower the bound, so iterate to a fixpoint.
  void root_filter() {
    bool again = true;
    while (again) {
      again = false;
      const double root_bound = lam_sum_ + slack_sum_;
      for (std::uint32_t c : cycles_) {
        if (cyc_dead_[c]) continue;
        double rc = -p_.cyc_w[c];
        for (std::uint32_t v : cyc_verts(c)) {
          if (v == kNone) break;
          rc += lam_[v];
        }
        if (rc <= 0.0) continue;
        if (root_bound - rc <= best_ + 0.5) {
          kill_cycle(c);
          again = true;
        }
      }
    }
  }

  // The swap (u r) fixes cycles containing both as sets; every other cycle
  // through either endpoint must map to the vertex set of some cycle.
  bool twin_verify(std::uint32_t u, std::uint32_t r) const {
    for (int pass = 0; pass < 2; ++pass) {
      const std::uint32_t x = pass ? r : u, y = pass ? u : r;
      for (std::uint32_t c : p_.vert_cycles[x]) {
        const auto& vs = cyc_verts(c);
        std::uint32_t a = vs[0], b = vs[1], cc = vs[2];
        if (a == y || b == y || cc == y) continue;
        if (a == x) a = y;
        else if (b == x) b = y;
        else cc = y;
        if (!keys_->count(set_key(a, b, cc))) return false;
      }
    }
    return true;
  }

  // Greedy star classing: each vertex joins the first verified twin class in
  // ascending order.  Verifying against the representative alone suffices:
  // the swaps (rep x) and (rep y) compose to (x y), so the whole class is
  // pairwise interchangeable.  Failed merges only cost pruning, never
  // correctness.
  void compute_classes() {
    vclass_.assign(p_.nv, kNone);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t v : verts_) {
      std::uint32_t joined = kNone;
      if (keys_ != nullptr) {
        for (std::uint32_t k = 0; k < reps.size(); ++k) {
          if (p_.vert_w[reps[k]] != p_.vert_w[v]) continue;
          if (twin_verify(v, reps[k])) {
            joined = k;
            break;
          }
        }
      }
      if (joined == kNone) {
        joined = static_cast<std::uint32_t>(reps.size());
        reps.push_back(v);
        class_members_.emplace_back();
      }
      vclass_[v] = joined;
      class_members_[joined].push_back(v);
    }
  }

  // Take disjoint cycles in descending weight (ties: canonical order) as the
  // starting incumbent; with integer-packed weights a tight incumbent often
  // lets the root bound close the search immediately.
  void seed_greedy() {
    std::vector<std::uint32_t> order = cycles_;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return p_.cyc_w[a] > p_.cyc_w[b];
                     });
    std::vector<std::uint8_t> used(p_.nv, 0);
    double score = 0.0;
    std::vector<std::uint32_t> taken;
    for (std::uint32_t c : order) {
      bool ok = true;
      for (std::uint32_t v : cyc_verts(c)) {
        if (v == kNone) break;
        if (used[v]) { ok = false; break; }
      }
      if (!ok) continue;
      for (std::uint32_t v : cyc_verts(c)) {
        if (v == kNone) break;
        used[v] = 1;
      }
      taken.push_back(c);
      score += p_.cyc_w[c];
    }
    best_ = score;
    best_set_ = std::move(taken);
  }

  // Optimistic-probe ladder: exhaust against a virtual incumbent floor from
  // just under the root bound down to the greedy value; the first probe that
  // finds anything holds the exact optimum.  The reduced-cost filter is
  // valid only against its probe's floor, so its kills are rolled back
  // between probes.  A nonzero budget bounds the nodes spent in this call;
  // on interruption the ladder restores the best real incumbent and reports
  // false.
  bool vertex_ladder(std::uint64_t budget) {
    budget_ = budget == 0 ? std::numeric_limits<std::uint64_t>::max()
                          : nodes_ + budget;
    aborted_ = false;
    const double greedy_best = best_;
    const std::vector<std::uint32_t> greedy_set = best_set_;
    const double root_bound = std::min(coverable_, lam_sum_ + slack_sum_);
    target_stop_ = std::floor(root_bound + 1e-6);
    double floorv = target_stop_ - 1.0;
    double drop = 1.0;
    for (;;) {
      if (floorv < greedy_best) floorv = greedy_best;
      best_ = floorv;
      best_set_.clear();
      found_ = false;
      stop_ = false;
      const std::size_t mark = trail_.size();
      root_filter();
      dfs();
      undo_to(mark);
      if (aborted_) {
        // A mid-probe find is a real solution (virtual floors only ever sit
        // below the certified region), so it survives as the incumbent.
        if (!found_) {
          best_ = greedy_best;
          best_set_ = greedy_set;
        }
        if (std::getenv("KEXSIM_SOLVER_DEBUG"))
          std::fprintf(stderr, "[solver] vertex nodes=%llu aborted best=%.0f\n",
                       static_cast<unsigned long long>(nodes_), best_);
        return false;
      }
      if (found_) break;
      if (floorv <= greedy_best) {
        best_ = greedy_best;
        best_set_ = greedy_set;
        break;
      }
      floorv -= drop;
      drop *= 4.0;
    }
    if (std::getenv("KEXSIM_SOLVER_DEBUG"))
      std::fprintf(stderr, "[solver] vertex nodes=%llu best=%.0f\n",
                   static_cast<unsigned long long>(nodes_), best_);
    return true;
  }

  void dfs() {
    if (stop_ || aborted_) return;
    ++nodes_;
    if (nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    const double lagr = lam_sum_ + slack_sum_;
    const double room = coverable_ < lagr ? coverable_ : lagr;
    // Integer-valued scores: an improvement is >= best + 1, so pruning at
    // best + 1/2 is exact and immune to the bound's rounding guards.
    if (current_ + room <= best_ + 0.5) return;

    std::uint32_t bv = kNone;
    std::uint32_t bavail = std::numeric_limits<std::uint32_t>::max();
    for (std::uint32_t v : verts_) {
      if (vert_state_[v] != kFree || avail_[v] == 0) continue;
      if (avail_[v] < bavail) {
        bavail = avail_[v];
        bv = v;
        if (bavail == 1) break;
      }
    }
    if (bv == kNone) {
      if (current_ > best_) {
        best_ = current_;
        best_set_ = chosen_;
        found_ = true;
        // A solution matching the root bound's floor is certifiably optimal.
        if (best_ >= target_stop_ - 0.5) stop_ = true;
        if (std::getenv("KEXSIM_SOLVER_DEBUG"))
          std::fprintf(stderr, "[solver] improve nodes=%llu best=%.0f\n",
                       static_cast<unsigned long long>(nodes_), best_);
      }
      return;
    }

    std::vector<std::uint32_t> alive;
    alive.reserve(bavail);
    for (std::uint32_t c : p_.vert_cycles[bv])
      if (!cyc_dead_[c]) alive.push_back(c);
    std::stable_sort(alive.begin(), alive.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return p_.cyc_w[a] > p_.cyc_w[b];
                     });

    // Branch once per twin-class signature of the partner vertices; siblings
    // with the same signature reach solutions that map onto each other.
    std::vector<std::uint64_t> seen;
    seen.reserve(alive.size());
    for (std::uint32_t c : alive) {
      std::uint32_t c1 = kNone, c2 = kNone;
      for (std::uint32_t v : cyc_verts(c)) {
        if (v == kNone) break;
        if (v == bv) continue;
        (c1 == kNone ? c1 : c2) = vclass_[v];
      }
      if (c2 != kNone && c2 < c1) std::swap(c1, c2);
      const std::uint64_t sig =
          (static_cast<std::uint64_t>(c1 + 1) << 32) | (c2 + 1);
      if (std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
      seen.push_back(sig);

      std::size_t mark = trail_.size();
      double cur0 = current_;
      chosen_.push_back(c);
      choose_cycle(c);
      dfs();
      undo_to(mark);
      current_ = cur0;
      chosen_.pop_back();
    }
    std::size_t mark = trail_.size();
    for (std::uint32_t t : class_members_[vclass_[bv]])
      if (vert_state_[t] == kFree) exclude_vertex(t);
    dfs();
    undo_to(mark);
  }

  const PackingProblem& p_;
  std::vector<std::uint32_t> verts_;
  std::vector<std::uint32_t> cycles_;
  const std::unordered_set<std::uint64_t>* keys_;
  std::vector<std::uint32_t> vclass_;
  std::vector<std::vector<std::uint32_t>> class_members_;
  std::vector<std::uint8_t> cyc_dead_;
  std::vector<std::uint8_t> vert_state_;
  std::vector<std::uint32_t> avail_;
  std::vector<double> lam_;
  std::vector<double> slack_;
  std::vector<TrailEntry> trail_;
  std::vector<std::uint32_t> chosen_;
  double current_ = 0.0;
  double coverable_ = 0.0;
  double lam_sum_ = std::numeric_limits<double>::infinity();
  double slack_sum_ = 0.0;
  double target_stop_ = std::numeric_limits<double>::infinity();
  std::uint64_t nodes_ = 0;
  std::uint64_t budget_ = std::numeric_limits<std::uint64_t>::max();
  double best_ = 0.0;
  bool found_ = false;
  bool stop_ = false;
  bool aborted_ = false;
  std::vector<std::uint32_t> best_set_;
};

// Disjoint-set over vertices, used to split the cycle hypergraph into
// independent components solved separately.
struct DisjointSet {
  std::vector<std::uint32_t> parent;
  explicit DisjointSet(std::uint32_t n) : parent(n) {
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Matching solve_over_cycles(const CompatGraph& g, std::span<const Cycle> cycles,
                           const Objective& obj) {
  Matching result;
  if (cycles.empty()) return result;

  PackingProblem p;
  p.nv = static_cast<std::uint32_t>(g.vertex_count());
  p.vert_w = vertex_weights(g, obj);
  p.cyc.reserve(cycles.size());
  p.cyc_w.reserve(cycles.size());
  p.vert_cycles.assign(p.nv, {});
  for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
    const Cycle& c = cycles[ci];
    std::array<std::uint32_t, 3> verts{kNone, kNone, kNone};
    double w = 0.0;
    for (std::size_t j = 0; j < c.verts.size(); ++j) {
      verts[j] = g.index_of(c.verts[j]);
      w += p.vert_w[verts[j]];
      p.vert_cycles[verts[j]].push_back(static_cast<std::uint32_t>(ci));
    }
    p.cyc.push_back(verts);
    p.cyc_w.push_back(w);
  }

  DisjointSet ds(p.nv);
  for (const auto& verts : p.cyc) {
    ds.unite(verts[0], verts[1]);
    if (verts[2] != kNone) ds.unite(verts[0], verts[2]);
  }

  // Group cycles and vertices by component, keeping ascending order within
  // each; components are processed in order of their smallest vertex.
  std::vector<std::uint32_t> roots;
  std::vector<std::vector<std::uint32_t>> comp_cycles, comp_verts;
  std::vector<std::uint32_t> root_slot(p.nv, kNone);
  for (std::uint32_t v = 0; v < p.nv; ++v) {
    if (p.vert_cycles[v].empty()) continue;
    std::uint32_t r = ds.find(v);
    if (root_slot[r] == kNone) {
      root_slot[r] = static_cast<std::uint32_t>(roots.size());
      roots.push_back(r);
      comp_cycles.emplace_back();
      comp_verts.emplace_back();
    }
    comp_verts[root_slot[r]].push_back(v);
  }
  for (std::uint32_t ci = 0; ci < p.cyc.size(); ++ci)
    comp_cycles[root_slot[ds.find(p.cyc[ci][0])]].push_back(ci);

  // Vertex-set keys of every cycle, shared by all components for the twin
  // checks; disabled in the (unreachable here) case of ids past 21 bits.
  std::unordered_set<std::uint64_t> cycle_keys;
  const std::unordered_set<std::uint64_t>* keys_ptr = nullptr;
  if (p.nv < kSlotMask) {
    cycle_keys.reserve(p.cyc.size() * 2);
    for (const auto& vs : p.cyc)
      cycle_keys.insert(set_key(vs[0], vs[1], vs[2]));
    keys_ptr = &cycle_keys;
  }

  if (std::getenv("KEXSIM_SOLVER_DEBUG"))
    std::fprintf(stderr, "[solver] over_cycles nv=%u ncyc=%zu comps=%zu\n",
                 p.nv, cycles.size(), roots.size());
  std::vector<std::uint32_t> chosen;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    ComponentSolver cs(p, std::move(comp_verts[k]), std::move(comp_cycles[k]),
                       keys_ptr);
    auto picked = cs.solve();
    chosen.insert(chosen.end(), picked.begin(), picked.end());
  }
  std::sort(chosen.begin(), chosen.end());

  result.cycles.reserve(chosen.size());
  for (std::uint32_t ci : chosen) result.cycles.push_back(cycles[ci]);
  std::sort(result.cycles.begin(), result.cycles.end());
  return result;
}

Matching solve(const CompatGraph& g, const Objective& obj, int k_max) {
  std::vector<Cycle> cycles = enumerate_cycles(g, k_max);
  return solve_over_cycles(g, cycles, obj);
}

}  // namespace kexsim
