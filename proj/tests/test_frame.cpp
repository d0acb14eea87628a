#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "volta/energy.hpp"
#include "volta/errors.hpp"
#include "volta/frame.hpp"
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

TEST_CASE("lexicographic orientation keeps canonical edge direction") {
  const Network net = make(triangle_network(1.0, 1.0, 1.0));
  const OrientedEdgeSet oriented = orient_lexicographic(net);
  CHECK(oriented.scheme == "lex");
  REQUIRE(oriented.edges.size() == 3);
  for (size_t i = 0; i < oriented.edges.size(); ++i) {
    CHECK(oriented.edges[i].from == net.edges()[i].u);
    CHECK(oriented.edges[i].to == net.edges()[i].v);
    CHECK(oriented.edges[i].c == net.edges()[i].c);
  }
}

TEST_CASE("current-induced orientation follows the reference dipole flow") {
  const Network net = make(path_network({1.0, 2.0, 4.0, 8.0}));
  const DipoleSystem sys(net);

  const OrientedEdgeSet down = orient_current_induced(sys, 0, 4);
  CHECK(down.scheme == "current:0:4");
  for (const auto& e : down.edges) CHECK(e.from < e.to);  // flow runs 0 -> 4

  const OrientedEdgeSet up = orient_current_induced(sys, 4, 0);
  CHECK(up.scheme == "current:4:0");
  for (const auto& e : up.edges) CHECK(e.from > e.to);  // reversed source/sink

  // On the unit triangle the dipole between 0 and 1 pushes current from 1 to
  // 2 against the canonical direction of edge (1,2); that edge alone flips.
  const Network tri = make(triangle_network(1.0, 1.0, 1.0));
  const DipoleSystem tsys(tri);
  const OrientedEdgeSet oriented = orient_current_induced(tsys, 0, 1);
  REQUIRE(oriented.edges.size() == 3);
  CHECK(oriented.edges[0].from == 0);  // (0,1) carries +2/3
  CHECK(oriented.edges[0].to == 1);
  CHECK(oriented.edges[1].from == 0);  // (0,2) carries +1/3
  CHECK(oriented.edges[1].to == 2);
  CHECK(oriented.edges[2].from == 2);  // (1,2) carries -1/3, so it flips
  CHECK(oriented.edges[2].to == 1);
}

TEST_CASE("ohm current values on the unit triangle") {
  const Network net = make(triangle_network(1.0, 1.0, 1.0));
  const std::vector<double> v01 = dipole(net, 0, 1);
  CHECK(current(net, v01, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(current(net, v01, 0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(current(net, v01, 1, 2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(current(net, v01, 2, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Kirchhoff balance at the source: everything leaving 0 sums to 1.
  CHECK(current(net, v01, 0, 1) + current(net, v01, 0, 2) ==
        doctest::Approx(1.0).epsilon(1e-13));
  Network path = make(path_network({1.0, 1.0}));
  CHECK_THROWS_AS((void)current(path, dipole(path, 0, 2), 0, 2), UsageError);
}

TEST_CASE("scaled dipoles on the unit triangle form a tight, non-orthonormal frame") {
  const Network net = make(triangle_network(1.0, 1.0, 1.0));
  const DipoleSystem sys(net);
  const ParsevalFrame frame(sys, orient_lexicographic(net));
  CHECK(frame.size() == 3);
  CHECK(frame.construction_defect() <= 1e-12);

  const FrameDiagnostics diag = frame_diagnostics(frame);
  CHECK(diag.edge_count == 3);
  CHECK(diag.rank == 2);
  CHECK(diag.redundancy == 1);
  CHECK_FALSE(diag.is_onb);
  CHECK(diag.idempotence_defect <= 1e-12);
  for (double n2 : diag.norms2) CHECK(n2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("frame gramian entries are energy inner products") {
  std::mt19937_64 rng(21);
  const Network net = make(volta_test::random_connected_graph(12, 7, rng));
  const DipoleSystem sys(net);
  const ParsevalFrame frame(sys, orient_lexicographic(net));
  const Eigen::MatrixXd& G = frame.gramian();
  for (int a = 0; a < frame.size(); ++a)
    for (int b = 0; b < frame.size(); ++b) {
      const double want = energy_inner(net, frame.vectors()[static_cast<size_t>(a)],
                                       frame.vectors()[static_cast<size_t>(b)]);
      CHECK(G(a, b) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("analysis is isometric and synthesis reconstructs") {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 6; ++round) {
    const int n = 5 + 7 * round;
    const int extra = (round % 2 == 0) ? 0 : 2 + round;
    const Network net = make(volta_test::random_connected_graph(n, extra, rng));
    const DipoleSystem sys(net);
    const ParsevalFrame frame(sys, orient_lexicographic(net));

    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> u = volta_test::random_values(n, rng);
      const std::vector<double> coeffs = frame.analysis(u);
      double sum2 = 0.0;
      for (double c : coeffs) sum2 += c * c;
      const double norm2 = energy_norm2(net, u);
      CHECK(std::abs(sum2 - norm2) <= 1e-10 * std::max(norm2, 1.0));

      // Synthesis of the analysis recovers the grounded representative.
      const std::vector<double> back = frame.synthesis(coeffs);
      const std::vector<double> want = grounded(net, u);
      for (int z = 0; z < n; ++z)
        CHECK(std::abs(back[static_cast<size_t>(z)] - want[static_cast<size_t>(z)]) <=
              1e-9);
    }
  }
}

TEST_CASE("orthonormal exactly on trees") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 8; ++round) {
    const int n = 3 + 6 * round;
    NetworkData data = volta_test::random_tree(n, rng);
    {
      const Network net = make(data);
      const DipoleSystem sys(net);
      const FrameDiagnostics diag =
          frame_diagnostics(ParsevalFrame(sys, orient_lexicographic(net)));
      CHECK(diag.is_onb);
      CHECK(diag.redundancy == 0);
      CHECK(diag.rank == n - 1);
      CHECK(diag.min_norm2 == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(diag.max_norm2 == doctest::Approx(1.0).epsilon(1e-10));
    }
    // One chord breaks orthonormality but not tightness.
    const Network tree_net = make(data);
    bool added = false;
    for (int i = 0; i < n && !added; ++i)
      for (int j = i + 1; j < n && !added; ++j)
        if (!tree_net.has_edge(i, j)) {
          data.edges.push_back({std::to_string(i), std::to_string(j), 1.5});
          added = true;
        }
    REQUIRE(added);
    const Network net = make(data);
    const DipoleSystem sys(net);
    const FrameDiagnostics diag =
        frame_diagnostics(ParsevalFrame(sys, orient_lexicographic(net)));
    CHECK_FALSE(diag.is_onb);
    CHECK(diag.redundancy == 1);
    CHECK(diag.rank == n - 1);
    CHECK(diag.idempotence_defect <= 1e-10);
  }
}

TEST_CASE("orientation choice only flips coefficient signs") {
  std::mt19937_64 rng(24);
  const Network net = make(volta_test::random_connected_graph(16, 9, rng));
  const DipoleSystem sys(net);
  const ParsevalFrame lex(sys, orient_lexicographic(net));
  const ParsevalFrame cur(sys, orient_current_induced(sys, 0, net.vertex_count() - 1));

  const FrameDiagnostics a = frame_diagnostics(lex);
  const FrameDiagnostics b = frame_diagnostics(cur);
  CHECK(a.rank == b.rank);
  CHECK(a.redundancy == b.redundancy);
  CHECK(a.min_norm2 == doctest::Approx(b.min_norm2).epsilon(1e-12));
  CHECK(a.max_norm2 == doctest::Approx(b.max_norm2).epsilon(1e-12));

  const std::vector<double> u = volta_test::random_values(net.vertex_count(), rng);
  const std::vector<double> ca = lex.analysis(u);
  const std::vector<double> cb = cur.analysis(u);
  REQUIRE(ca.size() == cb.size());
  for (size_t e = 0; e < ca.size(); ++e) {
    const bool flipped = lex.oriented().edges[e].from != cur.oriented().edges[e].from;
    CHECK(ca[e] == doctest::Approx(flipped ? -cb[e] : cb[e]).epsilon(1e-12));
  }
  const std::vector<double> ba = lex.synthesis(ca);
  const std::vector<double> bb = cur.synthesis(cb);
  for (size_t z = 0; z < ba.size(); ++z) CHECK(std::abs(ba[z] - bb[z]) <= 1e-10);
}
