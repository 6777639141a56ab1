#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "giqs/resonance.hpp"

namespace giqs {

// Weighted quick-union with path halving.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

struct PartitionBlock {
  ResonanceModule module;
  long label_j = 0;          // enumerates blocks sharing (rank, module)
  std::vector<int> members;  // indices into the report's point list
  double min_norm = 0.0, max_norm = 0.0;
  bool boundary_truncated = false;
};

struct SeparationViolation {
  int a = 0, b = 0;  // point indices
  double ratio = 0.0;
};

struct PartitionReport {
  ResonanceParams params;
  double r_min = 0.0, r_max = 0.0;
  std::vector<ActionPoint> points;           // the enumerated annulus
  std::vector<double> omega;                 // h_L per point
  std::vector<std::vector<VecI>> res_ks;     // resonant vectors per point
  std::vector<PartitionBlock> blocks;
  std::vector<int> block_of;                 // point -> block
  int n_truncated_blocks = 0;

  // measured constants of the partition theorem, over non-truncated blocks
  double measured_C = 1.0;                   // dyadicity: max of max/min norms
  double measured_K = 0.0;                   // separation: min cross-block ratio
  int min_pair_a = -1, min_pair_b = -1;

  // violation lists for properties (i)-(iii)
  std::vector<int> dyadic_violations;              // block ids with C_b > C_max
  std::vector<int> unresonant_members;             // property (ii) forward
  std::vector<SeparationViolation> separation_violations;

  bool cover_exact = false;                  // disjoint cover of the annulus

  bool has_violations() const {
    return !dyadic_violations.empty() || !separation_violations.empty();
  }
};

struct PartitionOptions {
  std::optional<double> c_max;   // dyadicity threshold; measured-only if unset
  std::optional<double> k_min;   // separation threshold; measured-only if unset
  bool verify_separation = true;
  double budget_mb = enumeration_budget_mb();
};

// Blocks as connected components of the adjacency "a <-> a+k whenever a is
// resonant with k or a+k is resonant with k" (the matrix-element support
// rule), with the properties of the partition theorem verified a
// posteriori. Violations are surfaced, never fixed.
inline PartitionReport build_partition(const GiqsModel& m, double r_min, double r_max,
                                       const ResonanceParams& p,
                                       const PartitionOptions& opts = {}) {
  p.validate(m.homogeneity);
  PartitionReport rep;
  rep.params = p;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.points = enumerate_lattice(m, r_min, r_max, opts.budget_mb);
  const int n = static_cast<int>(rep.points.size());

  std::unordered_map<std::string, int> lookup;
  lookup.reserve(2 * n);
  auto key_of = [](const VecI& idx) {
    return std::string(reinterpret_cast<const char*>(idx.data()), sizeof(int) * idx.size());
  };
  for (int i = 0; i < n; ++i) lookup.emplace(key_of(rep.points[i].index), i);

  rep.omega.resize(n);
  rep.res_ks.resize(n);
  for (int i = 0; i < n; ++i) rep.omega[i] = m.h(rep.points[i].point);

  UnionFind uf(n);
  std::vector<bool> touches_boundary(n, false);
  for (int i = 0; i < n; ++i) {
    const ActionPoint& a = rep.points[i];
    if (a.norm < p.radius) continue;
    rep.res_ks[i] = resonant_vectors(m, a, p);
    for (const VecI& k : rep.res_ks[i]) {
      for (int sgn : {+1, -1}) {
        VecI bidx = a.index + sgn * k;
        auto it = lookup.find(key_of(bidx));
        if (it != lookup.end()) {
          uf.unite(i, it->second);
        } else {
          VecD bpt = bidx.cast<double>() + m.kappa;
          if (m.cone.contains(bpt)) touches_boundary[i] = true;  // lattice point truncated away
        }
      }
    }
  }

  // assemble components in deterministic order (smallest member index)
  std::vector<int> root_to_block(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i);
    if (root_to_block[r] < 0) {
      root_to_block[r] = static_cast<int>(rep.blocks.size());
      rep.blocks.emplace_back();
    }
    PartitionBlock& b = rep.blocks[root_to_block[r]];
    b.members.push_back(i);
  }
  rep.block_of.assign(n, -1);
  for (size_t bi = 0; bi < rep.blocks.size(); ++bi) {
    PartitionBlock& b = rep.blocks[bi];
    std::vector<VecI> all_ks;
    b.min_norm = b.max_norm = rep.points[b.members.front()].norm;
    for (int i : b.members) {
      rep.block_of[i] = static_cast<int>(bi);
      b.min_norm = std::min(b.min_norm, rep.points[i].norm);
      b.max_norm = std::max(b.max_norm, rep.points[i].norm);
      if (touches_boundary[i]) b.boundary_truncated = true;
      all_ks.insert(all_ks.end(), rep.res_ks[i].begin(), rep.res_ks[i].end());
    }
    b.module = module_from_vectors(all_ks, m.d);
  }

  // label j per (rank, module basis), in block order
  std::map<std::pair<int, std::vector<std::int64_t>>, long> counters;
  for (PartitionBlock& b : rep.blocks) {
    std::vector<std::int64_t> flat(b.module.basis.data(),
                                   b.module.basis.data() + b.module.basis.size());
    b.label_j = counters[{b.module.rank, flat}]++;
    if (b.boundary_truncated) ++rep.n_truncated_blocks;
  }

  // --- verification ---------------------------------------------------
  rep.cover_exact = std::all_of(rep.block_of.begin(), rep.block_of.end(),
                                [](int b) { return b >= 0; });

  rep.measured_C = 1.0;
  for (size_t bi = 0; bi < rep.blocks.size(); ++bi) {
    const PartitionBlock& b = rep.blocks[bi];
    if (b.boundary_truncated) continue;
    double c = b.min_norm > 0 ? b.max_norm / b.min_norm : 1.0;
    rep.measured_C = std::max(rep.measured_C, c);
    if (opts.c_max && c > *opts.c_max) rep.dyadic_violations.push_back(static_cast<int>(bi));
    if (b.module.rank >= 1) {
      for (int i : b.members)
        if (rep.res_ks[i].empty()) rep.unresonant_members.push_back(i);
    }
  }

  if (opts.verify_separation && n > 1) {
    std::vector<double> nmu(n);
    for (int i = 0; i < n; ++i) nmu[i] = std::pow(rep.points[i].norm, p.mu);
    std::vector<bool> in_stats(n);
    for (int i = 0; i < n; ++i)
      in_stats[i] = !rep.blocks[rep.block_of[i]].boundary_truncated;
    double kmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!in_stats[i]) continue;
      const ActionPoint& a = rep.points[i];
      for (int j = i + 1; j < n; ++j) {
        if (!in_stats[j] || rep.block_of[i] == rep.block_of[j]) continue;
        double num = (a.point - rep.points[j].point).norm() +
                     std::abs(rep.omega[i] - rep.omega[j]);
        double ratio = num / (nmu[i] + nmu[j]);
        if (ratio < kmin) {
          kmin = ratio;
          rep.min_pair_a = i;
          rep.min_pair_b = j;
        }
        if (opts.k_min && ratio < *opts.k_min)
          rep.separation_violations.push_back({i, j, ratio});
      }
    }
    rep.measured_K = std::isfinite(kmin) ? kmin : 0.0;
  }
  return rep;
}

// Exhaustive recheck of the adjacency-closure property: every resonant k of
// every point leads to a point of the same block (or out of the annulus).
inline bool verify_adjacency_closure(const PartitionReport& rep) {
  std::unordered_map<std::string, int> lookup;
  auto key_of = [](const VecI& idx) {
    return std::string(reinterpret_cast<const char*>(idx.data()), sizeof(int) * idx.size());
  };
  for (size_t i = 0; i < rep.points.size(); ++i)
    lookup.emplace(key_of(rep.points[i].index), static_cast<int>(i));
  for (size_t i = 0; i < rep.points.size(); ++i) {
    for (const VecI& k : rep.res_ks[i]) {
      for (int sgn : {+1, -1}) {
        VecI bidx = rep.points[i].index + sgn * k;
        auto it = lookup.find(key_of(bidx));
        if (it != lookup.end() && rep.block_of[it->second] != rep.block_of[i]) return false;
      }
    }
  }
  return true;
}

}  // namespace giqs
