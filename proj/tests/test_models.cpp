#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "volta/convergence.hpp"
#include "volta/energy.hpp"
#include "volta/errors.hpp"
#include "volta/models.hpp"
#include "volta/network.hpp"

#include "random_graphs.hpp"

using namespace volta;

namespace {

Network make(const NetworkData& data) {
  Network net = Network::from_data(data);
  net.require_valid();
  return net;
}

}  // namespace

TEST_CASE("partial-sum classifier") {
  CHECK(to_string(Classification::Convergent) == "convergent");
  CHECK(to_string(Classification::Divergent) == "divergent");
  CHECK(to_string(Classification::Inconclusive) == "inconclusive");

  // Doubling increments keep adding 100% relative: divergent.
  CHECK(classify_partial_sums({1.0, 2.0, 4.0, 8.0}) == Classification::Divergent);
  // Last three increments below threshold: convergent.
  CHECK(classify_partial_sums({1.0, 1.5, 1.5 + 1e-8, 1.5 + 1.5e-8, 1.5 + 1.7e-8}) ==
        Classification::Convergent);
  // Too short to say anything.
  CHECK(classify_partial_sums({1.0}) == Classification::Inconclusive);
  CHECK(classify_partial_sums({}) == Classification::Inconclusive);
  // Intermediate growth stays in the gray zone.
  CHECK(classify_partial_sums({1.0, 1.01, 1.02, 1.03}) == Classification::Inconclusive);
  // Nonfinite reads divergent.
  CHECK(classify_partial_sums({1.0, std::numeric_limits<double>::infinity()}) ==
        Classification::Divergent);
  CHECK(classify_partial_sums({1.0, std::numeric_limits<double>::quiet_NaN()}) ==
        Classification::Divergent);
}

TEST_CASE("model generators produce the documented structures") {
  SUBCASE("path") {
    const Network net = make(path_network({1.0, 2.0, 4.0}));
    CHECK(net.vertex_count() == 4);
    CHECK(net.edge_count() == 3);
    CHECK(net.name(net.base()) == "0");
    CHECK(net.conductance(net.require_vertex("0"), net.require_vertex("1")) == 1.0);
    CHECK(net.conductance(net.require_vertex("2"), net.require_vertex("3")) == 4.0);
    CHECK_THROWS_AS((void)path_network({1.0, -1.0}), UsageError);
  }
  SUBCASE("geometric") {
    const Network net = make(geometric_network(2.0, 5));
    CHECK(net.vertex_count() == 6);
    for (int n = 1; n <= 5; ++n)
      CHECK(net.conductance(net.require_vertex(std::to_string(n - 1)),
                            net.require_vertex(std::to_string(n))) ==
            doctest::Approx(std::pow(2.0, n)).epsilon(1e-14));
  }
  SUBCASE("binary tree") {
    const Network net = make(binary_tree_network(0.4, 0.4, 0.2, 2));
    CHECK(net.vertex_count() == 7);
    CHECK(net.edge_count() == 6);
    CHECK(net.name(net.base()) == "o");
    CHECK(net.conductance(net.require_vertex("o"), net.require_vertex("o0")) ==
          doctest::Approx(0.4).epsilon(1e-14));
    // w("o1") = p1 / pm, so the edge to "o10" carries w * p0.
    CHECK(net.conductance(net.require_vertex("o1"), net.require_vertex("o10")) ==
          doctest::Approx((0.4 / 0.2) * 0.4).epsilon(1e-13));
    CHECK(tree_reversibility_defect(net, 0.4, 0.4, 0.2) <= 1e-14);
  }
  SUBCASE("tree parameter contracts") {
    CHECK_THROWS_AS((void)binary_tree_network(0.5, 0.5, 0.0, 3), UsageError);
    CHECK_THROWS_AS((void)binary_tree_network(0.5, 0.4, 0.2, 3), UsageError);
    CHECK_THROWS_AS((void)binary_tree_network(0.4, 0.4, 0.2, 1), UsageError);
    CHECK_THROWS_AS((void)binary_tree_network(0.4, 0.4, 0.2, 15), UsageError);
  }
  SUBCASE("tree vertex weights") {
    CHECK(tree_vertex_weight(0.4, 0.3, 0.3, "o") == doctest::Approx(1.0));
    CHECK(tree_vertex_weight(0.4, 0.3, 0.3, "o01") ==
          doctest::Approx(0.4 * 0.3 / (0.3 * 0.3)).epsilon(1e-13));
    CHECK_THROWS_AS((void)tree_vertex_weight(0.4, 0.3, 0.3, "x01"), UsageError);
    CHECK_THROWS_AS((void)tree_vertex_weight(0.4, 0.3, 0.3, "o02"), UsageError);
  }
  SUBCASE("lattice strip") {
    const int N = 6;
    const Network net = make(lattice_strip_network(2.0, 3.0, N, 0.5));
    CHECK(net.vertex_count() == 2 * (N + 1));
    CHECK(net.edge_count() == 3 * N + 1);
    CHECK(net.name(net.base()) == "a0");
    CHECK(net.conductance(net.require_vertex("a1"), net.require_vertex("a2")) ==
          doctest::Approx(4.0).epsilon(1e-14));
    CHECK(net.conductance(net.require_vertex("b1"), net.require_vertex("b2")) ==
          doctest::Approx(9.0).epsilon(1e-14));
    CHECK(net.conductance(net.require_vertex("a3"), net.require_vertex("b3")) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("triangle") {
    const Network net = make(triangle_network(1.0, 2.0, 3.0));
    CHECK(net.name(net.base()) == "2");
    CHECK(net.conductance(net.require_vertex("0"), net.require_vertex("1")) == 1.0);
    CHECK(net.conductance(net.require_vertex("0"), net.require_vertex("2")) == 2.0);
    CHECK(net.conductance(net.require_vertex("1"), net.require_vertex("2")) == 3.0);
  }
}

TEST_CASE("path closed forms match the solver") {
  std::mt19937_64 rng(51);
  for (int round = 0; round < 6; ++round) {
    const int N = 3 + 2 * round;
    std::vector<double> a;
    for (int k = 0; k < N; ++k) a.push_back(volta_test::random_conductance(rng));
    const Network net = make(path_network(a));
    const DipoleSystem sys(net);
    for (int x = 0; x < N; ++x)
      for (int y = x + 1; y <= N; ++y) {
        const std::vector<double> closed = path_dipole_closed_form(a, x, y);
        const int xi = net.require_vertex(std::to_string(x));
        const int yi = net.require_vertex(std::to_string(y));
        std::vector<double> solved = sys.dipole(xi, yi);
        // The closed form is normalized to vanish left of x; shift to match.
        const double shift =
            solved[static_cast<size_t>(net.require_vertex("0"))] - closed[0];
        for (int z = 0; z <= N; ++z) {
          const int zi = net.require_vertex(std::to_string(z));
          CHECK(std::abs(closed[static_cast<size_t>(z)] + shift -
                         solved[static_cast<size_t>(zi)]) <= 1e-12);
        }
        CHECK(path_distance_closed_form(a, x, y) ==
              doctest::Approx(sys.resistance(xi, yi)).epsilon(1e-12));
        CHECK(path_distance_closed_form(a, y, x) ==
              doctest::Approx(path_distance_closed_form(a, x, y)).epsilon(1e-15));
      }
  }
  CHECK(path_distance_closed_form({1.0, 2.0, 4.0}, 0, 3) == 1.75);
  CHECK_THROWS_AS((void)path_dipole_closed_form({1.0, 2.0}, 1, 1), UsageError);
  CHECK_THROWS_AS((void)path_dipole_closed_form({1.0, 2.0}, -1, 2), UsageError);
  CHECK_THROWS_AS((void)path_dipole_closed_form({1.0, 2.0}, 0, 3), UsageError);
}

TEST_CASE("bounded-metric probe separates summable from divergent resistances") {
  SUBCASE("doubling conductances: total resistance 1") {
    // The classifier needs three consecutive small increments, i.e. at least
    // five doubling checkpoints starting from 10: run out to 160.
    const SeriesProbe probe =
        bounded_metric_probe([](long long n) { return std::pow(2.0, n); }, 160);
    CHECK(probe.classification == Classification::Convergent);
    REQUIRE_FALSE(probe.checkpoints.empty());
    CHECK(std::abs(probe.checkpoints.back().second - 1.0) <= 1e-6);
    CHECK(probe.checkpoints.back().first == 160);
  }
  SUBCASE("unit conductances diverge") {
    const SeriesProbe probe = bounded_metric_probe([](long long) { return 1.0; }, 10000);
    CHECK(probe.classification == Classification::Divergent);
  }
  SUBCASE("quadratic conductances converge slowly") {
    const SeriesProbe probe = bounded_metric_probe(
        [](long long n) { return static_cast<double>(n) * static_cast<double>(n); },
        5242880);
    CHECK(probe.classification == Classification::Convergent);
    CHECK(probe.checkpoints.back().second ==
          doctest::Approx(1.6449338761133192).epsilon(1e-12));
  }
}

TEST_CASE("domain series: finite energy does not mean operator domain") {
  // The reciprocal-geometric function has constant series terms: divergent.
  const SeriesProbe out = friedrichs_domain_series(
      2.0, [](long long x) { return std::pow(2.0, -static_cast<double>(x)); }, 5000);
  CHECK(out.classification == Classification::Divergent);

  // A faster-decaying profile stays summable.
  const SeriesProbe in = friedrichs_domain_series(
      2.0, [](long long x) { return std::pow(4.0, -static_cast<double>(x)); }, 5000);
  CHECK(in.classification == Classification::Convergent);
}

TEST_CASE("defect recurrence on geometric conductances: frozen checkpoints") {
  SUBCASE("Q = 1.5") {
    const RecurrenceReport rep = deficiency_recurrence_geometric(1.5, 40);
    REQUIRE(rep.rows.size() == 41);
    CHECK(rep.rows[40].value == doctest::Approx(22.703459783629523).epsilon(1e-12));
    CHECK(rep.energy_checkpoints[0].second ==
          doctest::Approx(1269.0197398094617).epsilon(1e-12));
    CHECK(rep.energy_checkpoints[4].first == 640);
    CHECK(rep.energy_checkpoints[4].second ==
          doctest::Approx(1269.139155760886).epsilon(1e-12));
    CHECK(rep.energy_classification == Classification::Convergent);
    CHECK(rep.transfer_lo == doctest::Approx(0.666666546083096).epsilon(1e-10));
    CHECK_FALSE(rep.overflowed);
    REQUIRE(rep.rows[40].ratio_defined);
    CHECK(std::abs(rep.rows[40].ratio - 1.0 / 1.5) < 0.05);
  }
  SUBCASE("Q = 2") {
    const RecurrenceReport rep = deficiency_recurrence_geometric(2.0, 40);
    CHECK(rep.rows[40].value == doctest::Approx(4.0446828118647264).epsilon(1e-12));
    CHECK(rep.energy_checkpoints[0].second ==
          doctest::Approx(22.354376732497176).epsilon(1e-12));
    CHECK(rep.energy_checkpoints[4].second ==
          doctest::Approx(22.3543767554588).epsilon(1e-12));
    CHECK(rep.energy_classification == Classification::Convergent);
    CHECK(rep.transfer_lo == doctest::Approx(0.5).epsilon(1e-11));
    REQUIRE(rep.rows[40].ratio_defined);
    CHECK(std::abs(rep.rows[40].ratio - 0.5) < 0.05);
  }
  SUBCASE("Q = 5") {
    const RecurrenceReport rep = deficiency_recurrence_geometric(5.0, 40);
    CHECK(rep.rows[40].value == doctest::Approx(1.326173809214078).epsilon(1e-12));
    CHECK(rep.energy_checkpoints[0].second ==
          doctest::Approx(0.5447598305910107).epsilon(1e-12));
    CHECK(rep.energy_classification == Classification::Convergent);
    // The transfer eigenvalue is exact here; stored increments underflow
    // around n = 40, so the raw ratio column goes undefined instead of lying.
    CHECK(rep.transfer_lo == doctest::Approx(0.2).epsilon(1e-13));
  }
  SUBCASE("unit conductances blow up golden-ratio style") {
    const RecurrenceReport rep = deficiency_recurrence([](long long) { return 1.0; }, 40);
    CHECK(rep.rows[40].value == doctest::Approx(3.78890623731439e16).epsilon(1e-12));
    REQUIRE(rep.rows[40].ratio_defined);
    CHECK(rep.rows[40].ratio == doctest::Approx(2.61803398875).epsilon(1e-9));
    CHECK(rep.overflowed);
    CHECK(rep.overflow_at == 240);
    CHECK(rep.energy_classification == Classification::Divergent);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS((void)deficiency_recurrence_geometric(2.0, 19), UsageError);
  }
}

TEST_CASE("eigenfunction recurrence on the doubling path: frozen checkpoints") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    CAPTURE(lambda);
    const RecurrenceReport rep = eigenfunction_recurrence(2.0, lambda, 60);
    REQUIRE(rep.rows.size() == 61);
    CHECK(rep.energy_classification == Classification::Convergent);
    CHECK_FALSE(rep.overflowed);
    REQUIRE(rep.rows[60].ratio_defined);
    CHECK(rep.rows[60].ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.transfer_lo == doctest::Approx(0.5).epsilon(1e-9));
    if (lambda == 0.5) {
      CHECK(rep.rows[60].value == doctest::Approx(-0.02076900647302149).epsilon(1e-12));
      CHECK(rep.energy_checkpoints[3].second ==
            doctest::Approx(1.361523739814042).epsilon(1e-12));
    } else if (lambda == 1.0) {
      CHECK(rep.rows[60].value == doctest::Approx(-0.34861198120454956).epsilon(1e-12));
      CHECK(rep.energy_checkpoints[3].second ==
            doctest::Approx(2.207430292288586).epsilon(1e-12));
    } else {
      CHECK(rep.rows[60].value == doctest::Approx(-0.10235798941950212).epsilon(1e-12));
      CHECK(rep.energy_checkpoints[3].second ==
            doctest::Approx(4.507485160608404).epsilon(1e-12));
    }
  }

  SUBCASE("zero eigenvalue reproduces the reciprocal-geometric function exactly") {
    const RecurrenceReport rep = eigenfunction_recurrence(2.0, 0.0, 30);
    for (const auto& row : rep.rows)
      CHECK(row.value == std::pow(2.0, -static_cast<double>(row.n)));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS((void)eigenfunction_recurrence(2.0, -0.5, 40), UsageError);
    CHECK_THROWS_AS((void)eigenfunction_recurrence(2.0, 1.0, 19), UsageError);
  }
}

TEST_CASE("reciprocal-geometric harmonic profile") {
  SUBCASE("Q = 2") {
    const HarmonicReport rep = harmonic_geometric(2.0, 30);
    CHECK(rep.limit_energy == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(rep.truncated_energy - rep.closed_form_energy) <= 1e-12);
    CHECK(std::abs(rep.truncated_energy - rep.limit_energy) <= 1e-8);
    CHECK(rep.p_fixed_residual <= 1e-12);
  }
  SUBCASE("Q = 5") {
    const HarmonicReport rep = harmonic_geometric(5.0, 30);
    CHECK(rep.limit_energy == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(std::abs(rep.truncated_energy - rep.limit_energy) <= 1e-8);
    CHECK(rep.p_fixed_residual <= 1e-12);
  }
  SUBCASE("Q = 1.5 sits outside the 1e-8 band at N = 30, by the closed form") {
    const HarmonicReport rep = harmonic_geometric(1.5, 30);
    const double gap = std::abs(rep.truncated_energy - rep.limit_energy);
    CHECK(gap > 2e-6);
    CHECK(gap < 3e-6);
    CHECK(std::abs(rep.truncated_energy - rep.closed_form_energy) <= 1e-12);
  }
  SUBCASE("precondition Q > 1") {
    CHECK_THROWS_AS((void)harmonic_geometric(1.0, 30), UsageError);
    CHECK_THROWS_AS((void)harmonic_geometric(2.0, 1), UsageError);
  }
}

TEST_CASE("tree defect experiment: frozen energies and trends") {
  SUBCASE("balanced regime reads finite") {
    const TreeProbeReport rep = tree_deficiency_probe(0.4, 0.4, 0.2, 5, 8);
    REQUIRE(rep.depths == std::vector<int>{5, 6, 7, 8});
    REQUIRE(rep.energies.size() == 4);
    CHECK(rep.energies[0] == doctest::Approx(16.525287807733072).epsilon(1e-6));
    CHECK(rep.energies[1] == doctest::Approx(29.14148889236596).epsilon(1e-6));
    CHECK(rep.energies[2] == doctest::Approx(45.061226009700825).epsilon(1e-6));
    CHECK(rep.energies[3] == doctest::Approx(63.438703195039075).epsilon(1e-6));
    REQUIRE(rep.ratios.size() == 3);
    CHECK(rep.ratios[0] > rep.ratios[1]);
    CHECK(rep.ratios[1] > rep.ratios[2]);
    CHECK(rep.trend == "finite");
    CHECK(rep.max_relative_residual <= 1e-10);
    CHECK(rep.reversibility_defect <= 1e-12);
    double umax = 0.0;
    for (double v : rep.deepest_defect) umax = std::max(umax, std::abs(v));
    CHECK(umax > 2.0);
    CHECK(umax < 2.2);
  }
  SUBCASE("heavy-return regime reads infinite") {
    const TreeProbeReport rep = tree_deficiency_probe(0.25, 0.25, 0.5, 5, 8);
    REQUIRE(rep.energies.size() == 4);
    CHECK(rep.energies[0] == doctest::Approx(151408920.625).epsilon(1e-4));
    CHECK(rep.energies[3] == doctest::Approx(7.800086127450406e20).epsilon(1e-4));
    CHECK(rep.ratios[0] < rep.ratios[1]);
    CHECK(rep.ratios[1] < rep.ratios[2]);
    CHECK(rep.trend == "infinite");
    CHECK(rep.max_relative_residual <= 1e-10);
  }
  SUBCASE("depth-window contracts") {
    CHECK_THROWS_AS((void)tree_deficiency_probe(0.4, 0.4, 0.2, 3, 8), UsageError);
    CHECK_THROWS_AS((void)tree_deficiency_probe(0.4, 0.4, 0.2, 5, 11), UsageError);
    CHECK_THROWS_AS((void)tree_deficiency_probe(0.4, 0.4, 0.2, 7, 6), UsageError);
  }
}

TEST_CASE("triangle spectrum closed form") {
  SUBCASE("frozen values") {
    const TriangleSpectrumReport unit = triangle_spectrum(1.0, 1.0, 1.0);
    CHECK(unit.lambda1 == 0.0);
    CHECK(unit.lambda2 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(unit.lambda3 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(unit.gap <= 1e-12);
    CHECK(unit.crosscheck_defect <= 1e-12);

    const TriangleSpectrumReport rep = triangle_spectrum(1.0, 2.0, 3.0);
    CHECK(rep.lambda2 == doctest::Approx(6.0 - std::sqrt(3.0)).epsilon(1e-13));
    CHECK(rep.lambda3 == doctest::Approx(6.0 + std::sqrt(3.0)).epsilon(1e-13));
    CHECK(rep.gap == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-13));
    CHECK(rep.crosscheck_defect <= 1e-12);
  }
  SUBCASE("random triples agree with direct eigendecomposition") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
      const double c01 = volta_test::random_conductance(rng);
      const double c02 = volta_test::random_conductance(rng);
      const double c12 = volta_test::random_conductance(rng);
      const TriangleSpectrumReport rep = triangle_spectrum(c01, c02, c12);
      CHECK(rep.crosscheck_defect <= 1e-10);
      CHECK(rep.lambda1 == 0.0);
      CHECK(rep.lambda2 <= rep.lambda3);
      CHECK(rep.lambda2 + rep.lambda3 ==
            doctest::Approx(2.0 * (c01 + c02 + c12)).epsilon(1e-12));
    }
  }
}
