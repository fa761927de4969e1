#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "kexsim/arrivals.hpp"
#include "kexsim/blood.hpp"
#include "kexsim/crossmatch.hpp"
#include "kexsim/graph.hpp"
#include "kexsim/params.hpp"
#include "kexsim/pool.hpp"
#include "kexsim/rng.hpp"

using namespace kexsim;

namespace {

PairRecord make_pair(PairId id, BloodType patient, BloodType donor,
                     double sens = 0.0, bool critical = false) {
  PairRecord r;
  r.id = id;
  r.patient_blood = patient;
  r.donor_blood = donor;
  r.sensitization = sens;
  r.highly_sensitized = sens >= 0.8;
  r.critical = critical;
  return r;
}

}  // namespace

TEST_CASE("abo compatibility matches the full transfusion table") {
  using enum BloodType;
  // (patient, donor) -> expected, spelled out independently of the bitmask
  // implementation.
  struct Row { BloodType patient, donor; bool ok; };
  const Row table[] = {
      {O, O, true},   {O, A, false},  {O, B, false},  {O, AB, false},
      {A, O, true},   {A, A, true},   {A, B, false},  {A, AB, false},
      {B, O, true},   {B, A, false},  {B, B, true},   {B, AB, false},
      {AB, O, true},  {AB, A, true},  {AB, B, true},  {AB, AB, true},
  };
  for (const auto& row : table) {
    CAPTURE(to_string(row.patient));
    CAPTURE(to_string(row.donor));
    CHECK(abo_compatible(row.patient, row.donor) == row.ok);
  }
  for (auto t : kBloodTypes) CHECK(abo_compatible(t, t));  // reflexive
}

TEST_CASE("pair classification partitions all 16 combinations") {
  using enum BloodType;
  std::map<PairClass, std::set<std::pair<BloodType, BloodType>>> buckets;
  for (auto p : kBloodTypes)
    for (auto d : kBloodTypes) buckets[classify_pair(p, d)].insert({p, d});

  std::size_t covered = 0;
  for (const auto& [cls, members] : buckets) covered += members.size();
  CHECK(covered == 16);

  // The hard-to-match class: patient seeks a scarcer kidney than offered.
  CHECK(buckets[PairClass::Underdemanded] ==
        std::set<std::pair<BloodType, BloodType>>{
            {A, AB}, {B, AB}, {O, A}, {O, B}, {O, AB}});
  CHECK(buckets[PairClass::Overdemanded] ==
        std::set<std::pair<BloodType, BloodType>>{
            {A, O}, {B, O}, {AB, O}, {AB, A}, {AB, B}});
  CHECK(buckets[PairClass::SelfDemanded] ==
        std::set<std::pair<BloodType, BloodType>>{
            {O, O}, {A, A}, {B, B}, {AB, AB}});
  CHECK(buckets[PairClass::Reciprocal] ==
        std::set<std::pair<BloodType, BloodType>>{{A, B}, {B, A}});
}

TEST_CASE("blood type strings round-trip") {
  for (auto t : kBloodTypes) {
    auto parsed = blood_from_string(to_string(t));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == t);
  }
  CHECK(!blood_from_string("C").has_value());
  CHECK(!blood_from_string("").has_value());
}

TEST_CASE("keyed draws are pure functions of their key") {
  double a = keyed_unit(42, RngTag::Crossmatch, 7, 9);
  double b = keyed_unit(42, RngTag::Crossmatch, 7, 9);
  CHECK(a == b);
  CHECK(a >= 0.0);
  CHECK(a < 1.0);
  // Different tags, arguments, or seeds give different draws.
  CHECK(keyed_unit(42, RngTag::Perish, 7, 9) != a);
  CHECK(keyed_unit(42, RngTag::Crossmatch, 9, 7) != a);
  CHECK(keyed_unit(43, RngTag::Crossmatch, 7, 9) != a);
}

TEST_CASE("streams with equal seeds agree; derived seeds differ") {
  RngStream s1(123), s2(123);
  for (int i = 0; i < 100; ++i) CHECK(s1.next_u64() == s2.next_u64());
  CHECK(derive_seed(1, RngTag::Arrivals, 0) != derive_seed(1, RngTag::Arrivals, 1));
  CHECK(derive_seed(1, RngTag::Arrivals, 0) != derive_seed(2, RngTag::Arrivals, 0));
}

TEST_CASE("poisson sampler hits its mean") {
  RngStream s(7);
  const double mean = 5.0;
  const int reps = 4000;
  double sum = 0.0;
  for (int i = 0; i < reps; ++i) sum += s.poisson(mean);
  double avg = sum / reps;
  // SE of the mean of Poisson(5) over 4000 draws ~ sqrt(5/4000) ~ 0.035.
  CHECK(std::abs(avg - mean) < 3.0 * std::sqrt(mean / reps));
  CHECK(s.poisson(0.0) == 0);
  CHECK(s.poisson(-1.0) == 0);
}

TEST_CASE("us-2017 parameters and assumption checks") {
  ModelParams p = ModelParams::us_2017();
  CHECK(p.mu(BloodType::O) == doctest::Approx(0.44));
  CHECK(p.mu(BloodType::A) == doctest::Approx(0.36));
  CHECK(p.mu(BloodType::B) == doctest::Approx(0.10));
  CHECK(p.mu(BloodType::AB) == doctest::Approx(0.10));
  CHECK(p.gamma_bar() == doctest::Approx(0.41));

  ValidationReport r = validate_params(p);
  CHECK(r.gamma_bar == doctest::Approx(0.41));
  CHECK(r.all_passed());
  REQUIRE(r.checks.size() == 4);
}

TEST_CASE("assumption checks fail softly at their boundaries") {
  ModelParams p = ModelParams::us_2017();
  p.mu_H = 0.6;
  p.gamma_H = p.gamma_L = 0.5;  // gamma_bar = 0.5, not < 1/2
  ValidationReport r = validate_params(p);
  bool window_passed = true;
  for (const auto& c : r.checks)
    if (c.name == "sensitization-window") window_passed = c.passed;
  CHECK(!window_passed);

  // Equal perish rates: flagged, not fatal (degenerate configs simulate fine).
  ModelParams q = ModelParams::us_2017();
  q.rho_C = q.rho_NC = 0.25;
  ValidationReport rq = validate_params(q);
  CHECK(!rq.all_passed());
}

TEST_CASE("structurally invalid parameters are hard errors") {
  ModelParams p = ModelParams::us_2017();
  p.mu_blood = {0.4, 0.3, 0.1, 0.1};  // sums to 0.9
  CHECK_THROWS_AS(validate_params(p), std::invalid_argument);

  ModelParams q = ModelParams::us_2017();
  q.rho_C = 1.5;
  CHECK_THROWS_AS(validate_params(q), std::invalid_argument);

  ModelParams r = ModelParams::us_2017();
  r.n = 0.0;
  CHECK_THROWS_AS(validate_params(r), std::invalid_argument);

  ModelParams s = ModelParams::us_2017();
  s.k_max = 4;
  CHECK_THROWS_AS(validate_params(s), std::invalid_argument);
}

TEST_CASE("pool bookkeeping conserves pairs") {
  PoolState pool;
  std::vector<PairRecord> batch;
  for (PairId i = 0; i < 5; ++i)
    batch.push_back(make_pair(i, BloodType::A, BloodType::B));
  pool.add_arrivals(batch);
  CHECK(pool.active.size() == 5);
  CHECK(pool.conserved());

  std::vector<PairId> matched{1, 3};
  pool.mark_matched(matched, 2);
  pool.mark_perished(0, 2);
  CHECK(pool.active.size() == 2);
  CHECK(pool.total_matched == 2);
  CHECK(pool.total_perished == 1);
  CHECK(pool.conserved());
  CHECK(pool.find_active(1) == nullptr);
  REQUIRE(pool.find_active(2) != nullptr);
  CHECK(pool.find_active(2)->id == 2);

  // Exits are one-way: a matched pair cannot be matched or perished again.
  CHECK_THROWS_AS(pool.mark_matched(matched, 3), std::invalid_argument);
  CHECK_THROWS_AS(pool.mark_perished(0, 3), std::invalid_argument);
  for (const auto& r : pool.history) {
    CHECK(r.status != PairStatus::Active);
    CHECK(r.exit_time >= r.arrival_time);
  }
}

TEST_CASE("arrivals are bit-reproducible and id-sequential") {
  ModelParams p = ModelParams::us_2017();
  PairId id1 = 0, id2 = 0;
  auto a = generate_arrivals(p, 3, 99, &id1);
  auto b = generate_arrivals(p, 3, 99, &id2);
  REQUIRE(a.size() == b.size());
  CHECK(id1 == id2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].patient_blood == b[i].patient_blood);
    CHECK(a[i].donor_blood == b[i].donor_blood);
    CHECK(a[i].sensitization == b[i].sensitization);
    CHECK(a[i].critical == b[i].critical);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == i);
    CHECK(a[i].arrival_time == 3);
    CHECK(a[i].highly_sensitized == (a[i].sensitization >= p.sigma));
  }
  // A different period gives a different draw sequence.
  PairId id3 = 0;
  auto c = generate_arrivals(p, 4, 99, &id3);
  bool same = a.size() == c.size();
  if (same)
    for (std::size_t i = 0; i < a.size(); ++i)
      same = same && a[i].patient_blood == c[i].patient_blood &&
             a[i].donor_blood == c[i].donor_blood;
  CHECK(!same);
}

TEST_CASE("entry rejection keeps directly-transplantable couples out") {
  // Only O-O pairs drawn, crossmatch never fails: nobody registers.
  ModelParams p = ModelParams::us_2017();
  p.mu_blood = {1.0, 0.0, 0.0, 0.0};
  p.gamma_H = p.gamma_L = 0.0;
  p.arrivals = ArrivalModel::Fixed;
  p.n = 500;
  PairId id = 0;
  CHECK(generate_arrivals(p, 0, 5, &id).empty());
  CHECK(id == 0);

  // Crossmatch always fails: every draw registers.
  p.gamma_H = p.gamma_L = 1.0;
  p.mu_H = 1.0;
  id = 0;
  CHECK(generate_arrivals(p, 0, 5, &id).size() == 500);
}

TEST_CASE("arrival type frequencies match the product form") {
  // Highly-sensitized O-AB arrivals per gross draw ~ mu_O * mu_AB * mu_H;
  // the pair is ABO-incompatible with itself, so rejection never filters it.
  ModelParams p = ModelParams::us_2017();
  p.arrivals = ArrivalModel::Fixed;
  p.n = 10000;
  PairId id = 0;
  auto pairs = generate_arrivals(p, 0, 2024, &id);
  int hits = 0;
  for (const auto& r : pairs)
    if (r.patient_blood == BloodType::O && r.donor_blood == BloodType::AB &&
        r.highly_sensitized)
      ++hits;
  double frac = hits / 10000.0;
  double expect = 0.44 * 0.10 * 0.30;
  double se = std::sqrt(expect * (1 - expect) / 10000.0);
  CHECK(std::abs(frac - expect) < 3.0 * se);
}

TEST_CASE("graph edges follow ABO plus persistent tissue draws") {
  PoolState pool;
  std::vector<PairRecord> batch;
  batch.push_back(make_pair(0, BloodType::A, BloodType::B));
  batch.push_back(make_pair(1, BloodType::B, BloodType::A));
  pool.add_arrivals(batch);

  // Reciprocal pair, no sensitization: both edges, one 2-cycle.
  CrossmatchOracle oracle(1, false);
  CompatGraph g = build_graph(pool, oracle);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 2);

  // Fully sensitized patients: no edges regardless of ABO.
  PoolState pool2;
  std::vector<PairRecord> batch2;
  batch2.push_back(make_pair(0, BloodType::A, BloodType::B, 1.0));
  batch2.push_back(make_pair(1, BloodType::B, BloodType::A, 1.0));
  pool2.add_arrivals(batch2);
  CHECK(build_graph(pool2, oracle).edge_count() == 0);

  // Dense mode ignores sensitization but never ABO.
  CrossmatchOracle dense_oracle(1, true);
  CompatGraph gd = build_graph(pool2, dense_oracle);
  CHECK(gd.edge_count() == 2);
  PoolState pool3;
  std::vector<PairRecord> batch3;
  batch3.push_back(make_pair(0, BloodType::O, BloodType::AB));
  batch3.push_back(make_pair(1, BloodType::O, BloodType::AB));
  pool3.add_arrivals(batch3);
  CHECK(build_graph(pool3, dense_oracle).edge_count() == 0);
}

TEST_CASE("crossmatch outcomes are stable across rebuilds and pool changes") {
  ModelParams p = ModelParams::us_2017();
  PairId id = 0;
  PoolState pool;
  pool.add_arrivals(generate_arrivals(p, 0, 31, &id));
  CrossmatchOracle oracle(31, false);

  CompatGraph g1 = build_graph(pool, oracle);
  CompatGraph g2 = build_graph(pool, oracle);
  CHECK(g1.edge_list() == g2.edge_list());

  // Removing pairs never flips the edges among the survivors.
  auto before = g1.edge_list();
  std::vector<PairId> drop;
  for (std::size_t i = 0; i < pool.active.size(); i += 2)
    drop.push_back(pool.active[i].id);
  pool.mark_matched(drop, 0);
  auto after = build_graph(pool, oracle).edge_list();
  std::set<std::pair<PairId, PairId>> before_set(before.begin(), before.end());
  for (const auto& e : after) CHECK(before_set.count(e) == 1);
}

TEST_CASE("induced subgraphs keep exactly the surviving edges") {
  std::vector<PairRecord> recs;
  for (PairId i = 0; i < 4; ++i)
    recs.push_back(make_pair(i, BloodType::A, BloodType::A));
  std::vector<std::pair<PairId, PairId>> edges{{0, 1}, {1, 0}, {1, 2},
                                               {2, 3}, {3, 1}};
  CompatGraph g = graph_from_edges(recs, edges);
  CHECK(g.edge_count() == 5);

  CompatGraph sub = induced_subgraph(g, {1, 2, 3});
  CHECK(sub.vertex_count() == 3);
  auto el = sub.edge_list();
  std::set<std::pair<PairId, PairId>> expect{{1, 2}, {2, 3}, {3, 1}};
  CHECK(std::set<std::pair<PairId, PairId>>(el.begin(), el.end()) == expect);
}

TEST_CASE("graph_from_edges validates its input") {
  std::vector<PairRecord> recs{make_pair(0, BloodType::A, BloodType::A),
                               make_pair(1, BloodType::A, BloodType::A)};
  CHECK_THROWS_AS(
      graph_from_edges(recs, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(
      graph_from_edges(recs, {{0, 9}}), std::invalid_argument);
  recs.push_back(make_pair(1, BloodType::B, BloodType::B));
  CHECK_THROWS_AS(graph_from_edges(recs, {}), std::invalid_argument);
}
