#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "giqs/partition.hpp"

using namespace giqs;

TEST_CASE("torus partition: exact disjoint cover and closure") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport rep = build_partition(torus, 8.0, 32.0, p);

  CHECK(rep.cover_exact);
  // blocks partition the annulus: member lists disjoint and complete
  std::set<int> seen;
  size_t total = 0;
  for (const auto& b : rep.blocks) {
    REQUIRE(!b.members.empty());
    total += b.members.size();
    for (int i : b.members) CHECK(seen.insert(i).second);
  }
  CHECK(total == rep.points.size());

  CHECK(verify_adjacency_closure(rep));

  // rank-0 blocks are singletons with no resonant vector (brute re-check)
  for (const auto& b : rep.blocks) {
    if (b.module.rank == 0) {
      CHECK(b.members.size() == 1);
      int i = b.members.front();
      for (const VecI& k : integer_ball(2, std::pow(rep.points[i].norm, p.mu))) {
        CHECK(!is_resonant(torus, rep.points[i], k, p));
      }
    }
  }

  CHECK(rep.measured_K > 0.0);
  CHECK(rep.measured_C >= 1.0);
  CHECK(rep.separation_violations.empty());
}

TEST_CASE("partition determinism: identical runs produce identical blocks") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport a = build_partition(torus, 8.0, 20.0, p);
  PartitionReport b = build_partition(torus, 8.0, 20.0, p);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (size_t i = 0; i < a.blocks.size(); ++i) {
    CHECK(a.blocks[i].members == b.blocks[i].members);
    CHECK(a.blocks[i].module == b.blocks[i].module);
    CHECK(a.blocks[i].label_j == b.blocks[i].label_j);
  }
  CHECK(a.measured_K == b.measured_K);
}

TEST_CASE("boundary-truncated components are flagged") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport rep = build_partition(torus, 8.0, 64.0, p);
  int flagged = 0;
  for (const auto& b : rep.blocks) flagged += b.boundary_truncated ? 1 : 0;
  CHECK(flagged == rep.n_truncated_blocks);
  CHECK(flagged > 0);
  // (64, 0) is resonant with (0, 1) but (64, 1) has norm > 64
  VecI edge(2);
  edge << 64, 0;
  int idx = -1;
  for (size_t i = 0; i < rep.points.size(); ++i)
    if (rep.points[i].index == edge) idx = static_cast<int>(i);
  REQUIRE(idx >= 0);
  CHECK(rep.blocks[rep.block_of[idx]].boundary_truncated);
}

TEST_CASE("property (ii) forward violations match a brute-force rim scan") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport rep = build_partition(torus, 8.0, 28.0, p);
  std::set<int> reported(rep.unresonant_members.begin(), rep.unresonant_members.end());
  std::set<int> expected;
  for (size_t bi = 0; bi < rep.blocks.size(); ++bi) {
    const auto& b = rep.blocks[bi];
    if (b.module.rank < 1 || b.boundary_truncated) continue;
    for (int i : b.members)
      if (rep.res_ks[i].empty()) expected.insert(i);
  }
  CHECK(reported == expected);
}

TEST_CASE("separation constant: min ratio is reproducible") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport rep = build_partition(torus, 8.0, 24.0, p);
  REQUIRE(rep.min_pair_a >= 0);
  const ActionPoint& a = rep.points[rep.min_pair_a];
  const ActionPoint& b = rep.points[rep.min_pair_b];
  double num = (a.point - b.point).norm() +
               std::abs(rep.omega[rep.min_pair_a] - rep.omega[rep.min_pair_b]);
  double den = std::pow(a.norm, p.mu) + std::pow(b.norm, p.mu);
  CHECK(rep.measured_K == Catch::Approx(num / den).epsilon(1e-14));
}

TEST_CASE("block labels enumerate blocks sharing (s, M)") {
  GiqsModel torus = make_torus_identity(2);
  ResonanceParams p = default_resonance(torus);
  PartitionReport rep = build_partition(torus, 8.0, 24.0, p);
  std::map<std::pair<int, std::string>, std::set<long>> seen;
  for (const auto& b : rep.blocks) {
    std::string key(reinterpret_cast<const char*>(b.module.basis.data()),
                    sizeof(std::int64_t) * b.module.basis.size());
    CHECK(seen[{b.module.rank, key}].insert(b.label_j).second);  // j unique per (s, M)
  }
  for (auto& [k, js] : seen) {  // and contiguous from 0
    long expect = 0;
    for (long j : js) CHECK(j == expect++);
  }
}
