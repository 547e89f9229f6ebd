#include <doctest.h>

#include <cmath>

#include "convexlab/weak.hpp"

using namespace convexlab;
using doctest::Approx;

TEST_CASE("pairing traces") {
  const auto units = SequenceFamily::unit_vectors();
  const auto spike = pairing_trace(units, SparseSeq::unit(5), 10);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(spike[n - 1] == (n == 5 ? 1.0 : 0.0));

  const SparseSeq g({{1, 0.5}, {2, -1.0}, {3, 2.0}});
  const auto tr = pairing_trace(units, g, 6);
  CHECK(tr[0] == 0.5);
  CHECK(tr[1] == -1.0);
  CHECK(tr[2] == 2.0);
  CHECK(tr[5] == 0.0);

  const auto tail = SequenceFamily::decaying_tail(SparseSeq::unit(1));
  const auto one = pairing_trace(tail, SparseSeq::unit(1), 20);
  CHECK(one[0] == 2.0);
  for (std::size_t n = 2; n <= 20; ++n) CHECK(one[n - 1] == 1.0);
  CHECK_THROWS_AS(pairing_trace(units, g, 201), DomainError);
}

TEST_CASE("weak limit checks") {
  const auto coords = FunctionalFamily::coordinates(20);
  const auto a = weak_limit_check(SequenceFamily::unit_vectors(), coords, SparseSeq(), 1e-12, 200);
  CHECK(a.pass);
  CHECK(a.settle_index == 21);

  const auto b = weak_limit_check(SequenceFamily::decaying_tail(SparseSeq::unit(1)), coords,
                                  SparseSeq::unit(1), 1e-12, 200);
  CHECK(b.pass);

  const auto c = weak_limit_check(SequenceFamily::unit_vectors(), coords, SparseSeq::unit(1), 1e-12, 200);
  CHECK_FALSE(c.pass);
  CHECK(coords.ids[c.worst_functional] == "e1");
  CHECK(c.worst_deviation == 1.0);
}

TEST_CASE("standard functional family is reproducible") {
  const auto a = FunctionalFamily::standard(2.0, 7);
  const auto b = FunctionalFamily::standard(2.0, 7);
  REQUIRE(a.members.size() == 30);
  for (std::size_t i = 0; i < a.members.size(); ++i) CHECK(a.members[i] == b.members[i]);
  for (const auto& m : a.members) CHECK(m.max_index() <= 50);
}

TEST_CASE("Riesz-Radon upgrade in lp") {
  for (double p : {1.5, 2.0, 3.0}) {
    const NormSpec spec = NormSpec::lp(p);
    const auto fam = SequenceFamily::decaying_tail(SparseSeq::unit(1));
    const auto r = riesz_radon_check(fam, FunctionalFamily::standard(conjugate_exponent(p), 0),
                                     SparseSeq::unit(1), spec, 1e-12, 200);
    CHECK(r.status == UpgradeStatus::holds);
    // Exact oracle: ‖x_n − e₁‖ = 1/n.
    for (const auto& row : r.rows) CHECK(row.distance == Approx(1.0 / row.n).epsilon(1e-14));
    for (double ratio : r.doubling_ratios) CHECK(ratio == Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("Riesz-Radon fails in l-inf") {
  const NormSpec linf = NormSpec::lp(kInf);
  const auto r = riesz_radon_check(SequenceFamily::moving_spike(SparseSeq::unit(1)),
                                   FunctionalFamily::standard(1.0, 0), SparseSeq::unit(1), linf, 1e-12, 200);
  CHECK(r.status == UpgradeStatus::fails);
  CHECK(r.weak.pass);
  CHECK(r.norms_converge);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].distance == 1.0);
}

TEST_CASE("tends_to_zero heuristic") {
  CHECK(tends_to_zero({1.0, 0.5, 0.25, 0.125}, 1e-12));
  CHECK_FALSE(tends_to_zero({1.0, 1.0, 1.0, 1.0}, 1e-12));
  CHECK(tends_to_zero({1.0, 0.0}, 1e-12));
  CHECK_FALSE(tends_to_zero({}, 1e-12));
}

TEST_CASE("pairwise distances among unit vectors") {
  const NormSpec l2 = NormSpec::lp(2.0);
  for (std::size_t i = 1; i <= 50; ++i) {
    for (std::size_t j = i + 1; j <= 50; ++j) {
      CHECK(std::abs(norm_eval(SparseSeq::unit(i) - SparseSeq::unit(j), l2) - std::sqrt(2.0)) <= 1e-12);
    }
  }
}

TEST_CASE("midpoint Cauchy lemma") {
  const NormSpec l2 = NormSpec::lp(2.0);
  SequenceFamily circle{[](std::size_t n) {
                          const double t = 1.0 / static_cast<double>(n);
                          return SparseSeq({{1, std::cos(t)}, {2, std::sin(t)}});
                        },
                        200, "circle"};
  CHECK(midpoint_cauchy_check(circle, l2, 1e-9, 200).status == CauchyStatus::pass);

  const auto alt = SequenceFamily::cycle({SparseSeq::unit(1), SparseSeq::unit(2)});
  const auto v = midpoint_cauchy_check(alt, l2, 1e-9, 40);
  CHECK(v.status == CauchyStatus::vacuous);
  CHECK(v.min_tail_midpoint == Approx(std::sqrt(2.0) / 2));

  const auto flat = SequenceFamily::cycle({SparseSeq({{1, 1.0}, {2, 1.0}}), SparseSeq({{2, 1.0}, {3, 1.0}})});
  const auto w = midpoint_cauchy_check(flat, NormSpec::lp(kInf), 1e-9, 40);
  CHECK(w.status == CauchyStatus::non_uniform_witness);
  CHECK(w.min_tail_midpoint == 1.0);
  CHECK(w.max_tail_distance == 1.0);
  CHECK_THROWS_AS(midpoint_cauchy_check(SequenceFamily::moving_spike(SparseSeq::unit(1)), l2, 1e-9, 40),
                  DomainError);
}

TEST_CASE("trace csv") {
  const auto csv = trace_csv(SequenceFamily::unit_vectors(), FunctionalFamily::coordinates(2), SparseSeq(),
                             NormSpec::lp(2.0), 2);
  CHECK(csv == "n,functional_id,pairing,norm_xn,distance_to_candidate\n"
               "1,e1,1,1,1\n1,e2,0,1,1\n2,e1,0,1,1\n2,e2,1,1,1\n");
}
