#include "volta/operators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "volta/errors.hpp"
#include "volta/format.hpp"

namespace volta {

OperatorPair build_K(const DipoleSystem& sys) {
  const int m = sys.reduced_size();
  OperatorPair op;
  op.forward = Eigen::MatrixXd::Identity(m, m);
  op.adjoint = sys.gramian();
  op.domain_note = "mean-zero coefficient vectors over V'";
  return op;
}

OperatorPair build_L(const DipoleSystem& sys) {
  const int m = sys.reduced_size();
  OperatorPair op;
  op.forward = Eigen::MatrixXd(sys.solver().reduced_laplacian());
  op.adjoint = Eigen::MatrixXd::Identity(m, m);
  op.domain_note = "mean-zero coefficient vectors over V'";
  return op;
}

namespace {

// Grounded full-length values of the coefficient vector zeta in dipole
// coordinates: (sum_x zeta_x v_x)(z) = (G zeta)_z.
std::vector<double> embed_dipole_coords(const DipoleSystem& sys,
                                        const Eigen::VectorXd& zeta) {
  const Eigen::VectorXd vals = sys.gramian() * zeta;
  std::vector<double> full(static_cast<size_t>(sys.network().vertex_count()), 0.0);
  for (int r = 0; r < sys.reduced_size(); ++r)
    full[static_cast<size_t>(sys.full_index(r))] = vals(r);
  return full;
}

Eigen::VectorXd random_mean_zero(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd xi(m);
  for (int i = 0; i < m; ++i) xi(i) = unif(rng);
  xi.array() -= xi.mean();
  return xi;
}

}  // namespace

double adjointness_defect_K(const DipoleSystem& sys, int trials, std::uint64_t seed) {
  const Network& net = sys.network();
  const int m = sys.reduced_size();
  const Eigen::MatrixXd& G = sys.gramian();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd xi = random_mean_zero(rng, m);
    const Eigen::VectorXd eta = random_mean_zero(rng, m);
    const double lhs =
        energy_inner(net, embed_dipole_coords(sys, xi), embed_dipole_coords(sys, eta));
    const double rhs = xi.dot(G * eta);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

double adjointness_defect_L(const DipoleSystem& sys, int trials, std::uint64_t seed) {
  const Network& net = sys.network();
  const int m = sys.reduced_size();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const Eigen::SparseMatrix<double>& lred = sys.solver().reduced_laplacian();
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd xi = random_mean_zero(rng, m);
    const Eigen::VectorXd eta = random_mean_zero(rng, m);
    // sum_x xi_x delta_x has dipole coordinates L_red xi; its energy pairing
    // with sum eta_y v_y must equal the plain coefficient pairing xi . eta.
    const Eigen::VectorXd lcoords = lred * xi;
    const double lhs =
        energy_inner(net, embed_dipole_coords(sys, lcoords), embed_dipole_coords(sys, eta));
    const double rhs = xi.dot(eta);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

FriedrichsReport friedrichs_matrix(const DipoleSystem& sys, int probes,
                                   std::uint64_t seed, double tol) {
  const Network& net = sys.network();
  const int m = sys.reduced_size();
  if (m < 2) throw UsageError("factorization report needs at least 3 vertices");

  FriedrichsReport rep;

  // Mean-zero basis phi_i = v_{x_i} - v_{xref}, x_i running over V' \ {xref}.
  // <phi_i, L phi_j>_E = <phi_i, delta_{x_j} - delta_{xref}>_E
  //                    = (phi_i(x_j) - phi_i(xref)) = delta_ij + 1 exactly,
  // because v_a(b) = G_ab and the cross terms collapse.
  const int d = m - 1;
  rep.form = Eigen::MatrixXd::Ones(d, d) + Eigen::MatrixXd::Identity(d, d);

  const Eigen::MatrixXd& G = sys.gramian();
  rep.metric.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      rep.metric(i, j) = G(i + 1, j + 1) - G(i + 1, 0) - G(0, j + 1) + G(0, 0);
    }
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(rep.form, rep.metric);
  if (ges.info() != Eigen::Success)
    throw VerificationError("generalized eigensolve of the form pair failed");
  rep.spectrum.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + d);
  std::sort(rep.spectrum.begin(), rep.spectrum.end());

  // Probe the factorization: for mean-zero xi over V', u = sum xi_x v_x must
  // satisfy (L u)(z) = xi_z on V' and (L u)(base) = -sum xi = 0.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const size_t n = static_cast<size_t>(net.vertex_count());
  for (int t = 0; t < probes; ++t) {
    Eigen::VectorXd xi(m);
    for (int i = 0; i < m; ++i) xi(i) = unif(rng);
    xi.array() -= xi.mean();
    const double sup = xi.cwiseAbs().maxCoeff();
    if (sup > 0) xi /= sup;

    const Eigen::VectorXd ured = G * xi;
    std::vector<double> u(n, 0.0);
    for (int r = 0; r < m; ++r) u[static_cast<size_t>(sys.full_index(r))] = ured(r);

    const std::vector<double> lu = laplacian_apply(net, u);
    for (int z = 0; z < net.vertex_count(); ++z) {
      const double want =
          z == net.base() ? 0.0 : xi(sys.reduced_index(z));
      const double defect = std::abs(lu[static_cast<size_t>(z)] - want);
      if (defect > rep.factorization_defect) {
        rep.factorization_defect = defect;
        rep.defect_vertex = z;
      }
    }

    // Quadratic-form route: <u, L u>_E must equal sum_x xi_x^2 ... through the
    // pairing <u, sum xi_x delta_x>_E = sum xi_x u(x) = xi' G xi.
    const double via_energy = energy_norm2(net, [&] {
      std::vector<double> tmp(n, 0.0);
      for (int r = 0; r < m; ++r) tmp[static_cast<size_t>(sys.full_index(r))] = ured(r);
      return tmp;
    }());
    const double via_pairing = xi.dot(ured);
    const double scale = std::max({std::abs(via_energy), std::abs(via_pairing), 1.0});
    rep.quadratic_form_defect =
        std::max(rep.quadratic_form_defect, std::abs(via_energy - via_pairing) / scale);
  }

  if (rep.factorization_defect > tol)
    throw VerificationError("factorization defect " + fmt_g12(rep.factorization_defect) +
                            " exceeds tolerance " + fmt_g12(tol));
  return rep;
}

double greens_gauss_check(const DipoleSystem& sys) {
  const Network& net = sys.network();
  const int m = sys.reduced_size();
  const Eigen::MatrixXd& G = sys.gramian();
  const size_t n = static_cast<size_t>(net.vertex_count());

  double worst = 0.0;
  for (int r = 0; r < m; ++r) {
    // Row x of the gramian is the grounded potential of v_x; applying the
    // network Laplacian must return delta_x - delta_base.
    std::vector<double> u(n, 0.0);
    for (int s = 0; s < m; ++s) u[static_cast<size_t>(sys.full_index(s))] = G(r, s);
    const std::vector<double> lu = laplacian_apply(net, u);
    const int x = sys.full_index(r);
    for (int z = 0; z < net.vertex_count(); ++z) {
      if (z == net.base()) continue;
      const double want = z == x ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(lu[static_cast<size_t>(z)] - want));
    }
  }
  return worst;
}

TransitionReport transition_operator(const Network& net) {
  net.require_valid();
  const int n = net.vertex_count();
  TransitionReport rep;
  rep.P = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd c(n);
  for (int x = 0; x < n; ++x) {
    c(x) = net.total_conductance(x);
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)])
      rep.P(x, nb.vertex) = nb.c / c(x);
  }

  rep.row_sum_defect = (rep.P.rowwise().sum().array() - 1.0).abs().maxCoeff();

  // L = diag(c)(I - P).
  const Eigen::MatrixXd lap = laplacian_matrix(net);
  rep.factorization_defect =
      (lap - c.asDiagonal() * (Eigen::MatrixXd::Identity(n, n) - rep.P))
          .cwiseAbs()
          .maxCoeff();

  // S = D^{1/2} P D^{-1/2} with D = diag(c) is symmetric with the same
  // spectrum; its (x, y) entry is c_xy / sqrt(c(x) c(y)).
  const Eigen::VectorXd sq = c.cwiseSqrt();
  Eigen::MatrixXd S = sq.asDiagonal() * rep.P * sq.cwiseInverse().asDiagonal();
  rep.symmetrized_asymmetry = (S - S.transpose()).cwiseAbs().maxCoeff();
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw VerificationError("transition operator eigensolve failed");
  rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.spectral_radius =
      std::max(std::abs(rep.eigenvalues.front()), std::abs(rep.eigenvalues.back()));
  return rep;
}

PDipoleReport p_on_dipoles_check(const DipoleSystem& sys, int trials,
                                 std::uint64_t seed) {
  const Network& net = sys.network();
  const int n = net.vertex_count();
  const int m = sys.reduced_size();
  const size_t sn = static_cast<size_t>(n);
  std::mt19937_64 rng(seed);

  PDipoleReport rep;
  const std::vector<std::vector<Neighbor>> trans = walk_data(net).transition;

  std::vector<std::vector<double>> vbase(static_cast<size_t>(m));
  for (int r = 0; r < m; ++r)
    vbase[static_cast<size_t>(r)] = sys.dipole_to_base(sys.full_index(r));

  auto apply_p = [&](const std::vector<double>& u) {
    std::vector<double> out(sn, 0.0);
    for (int z = 0; z < n; ++z)
      for (const Neighbor& nb : trans[static_cast<size_t>(z)])
        out[static_cast<size_t>(z)] += nb.c * u[static_cast<size_t>(nb.vertex)];
    return out;
  };
  // sum_y p_xy v_y with v_base = 0, as grounded values.
  auto averaged_dipoles = [&](int x) {
    std::vector<double> out(sn, 0.0);
    for (const Neighbor& nb : trans[static_cast<size_t>(x)]) {
      if (nb.vertex == net.base()) continue;
      const std::vector<double>& vy = vbase[static_cast<size_t>(sys.reduced_index(nb.vertex))];
      for (size_t i = 0; i < sn; ++i) out[i] += nb.c * vy[i];
    }
    return out;
  };

  // Per dipole the identity is exact on V'; the defect at the base is the
  // x-independent spike 1/c(base), outside the grounded coordinates.
  for (int r = 0; r < m; ++r) {
    const int x = sys.full_index(r);
    const std::vector<double> lhs = apply_p(vbase[static_cast<size_t>(r)]);
    const std::vector<double> rhs = averaged_dipoles(x);
    for (int z = 0; z < n; ++z) {
      if (z == net.base()) continue;
      rep.max_pointwise_defect =
          std::max(rep.max_pointwise_defect,
                   std::abs(lhs[static_cast<size_t>(z)] - rhs[static_cast<size_t>(z)]));
    }
  }

  // On mean-zero combinations the base spikes cancel and the identity holds
  // as an equality in the energy norm.
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd xi(m);
    for (int i = 0; i < m; ++i) xi(i) = unif(rng);
    xi.array() -= xi.mean();

    std::vector<double> u(sn, 0.0), w(sn, 0.0);
    for (int r = 0; r < m; ++r) {
      const std::vector<double>& vx = vbase[static_cast<size_t>(r)];
      const std::vector<double> ax = averaged_dipoles(sys.full_index(r));
      for (size_t i = 0; i < sn; ++i) {
        u[i] += xi(r) * vx[i];
        w[i] += xi(r) * ax[i];
      }
    }
    const std::vector<double> pu = apply_p(u);
    std::vector<double> diff(sn);
    for (size_t i = 0; i < sn; ++i) diff[i] = pu[i] - w[i];
    const double e = std::sqrt(energy_norm2(net, diff));
    const double scale = std::max(std::sqrt(energy_norm2(net, u)), 1e-300);
    rep.max_energy_defect = std::max(rep.max_energy_defect, e / scale);
  }

  // Coefficient-level preservation: rows of P sum to 1, so mean-zero xi over
  // all of V stays mean-zero under P-transpose.
  const Eigen::MatrixXd P = transition_operator(net).P;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi(i) = unif(rng);
    xi.array() -= xi.mean();
    const double s = (P.transpose() * xi).sum() - xi.sum();
    rep.max_meanzero_defect = std::max(rep.max_meanzero_defect, std::abs(s));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Deficiency probe
// ---------------------------------------------------------------------------

namespace {

std::vector<int> bfs_layers(const Network& net, int start) {
  std::vector<int> layer(static_cast<size_t>(net.vertex_count()), -1);
  std::deque<int> q;
  layer[static_cast<size_t>(start)] = 0;
  q.push_back(start);
  while (!q.empty()) {
    const int x = q.front();
    q.pop_front();
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
      if (layer[static_cast<size_t>(nb.vertex)] < 0) {
        layer[static_cast<size_t>(nb.vertex)] = layer[static_cast<size_t>(x)] + 1;
        q.push_back(nb.vertex);
      }
    }
  }
  return layer;
}

}  // namespace

DeficiencyProbeReport deficiency_probe(const Network& net,
                                       const std::vector<char>& interior_mask,
                                       const AnchorConstraint& anchor) {
  net.require_valid();
  const int n = net.vertex_count();
  if (interior_mask.size() != static_cast<size_t>(n))
    throw UsageError("interior mask length does not match vertex count");
  if (anchor.terms.empty()) throw UsageError("anchor constraint has no terms");

  std::vector<int> interior;
  for (int x = 0; x < n; ++x)
    if (interior_mask[static_cast<size_t>(x)]) interior.push_back(x);
  const int k = static_cast<int>(interior.size());
  if (k < 8)
    throw UsageError("truncation too small: " + std::to_string(k) +
                     " interior vertices (need >= 8)");
  const int rows = k + 1;

  // Constraints C u = b: ((L + I) u)(x) = 0 on the interior, plus the anchor.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < k; ++r) {
    const int x = interior[static_cast<size_t>(r)];
    C(r, x) = net.total_conductance(x) + 1.0;
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)])
      C(r, nb.vertex) -= nb.c;
  }
  for (const auto& [vertex, coeff] : anchor.terms) {
    if (vertex < 0 || vertex >= n) throw UsageError("anchor vertex out of range");
    C(k, vertex) += coeff;
  }
  b(k) = anchor.rhs;

  // Least-energy solution: minimize u' L u subject to C u = b, via the KKT
  // system [[2L, C'], [C, 0]] — dense partially pivoted LU keeps the solve
  // stable when the defect values span many orders of magnitude.
  const Eigen::MatrixXd lap = laplacian_matrix(net);
  const int dim = n + rows;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
  kkt.topLeftCorner(n, n) = 2.0 * lap;
  kkt.topRightCorner(n, rows) = C.transpose();
  kkt.bottomLeftCorner(rows, n) = C;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs.tail(rows) = b;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
  const Eigen::VectorXd sol = lu.solve(rhs);
  Eigen::VectorXd u = sol.head(n);

  DeficiencyProbeReport rep;
  rep.u.assign(u.data(), u.data() + n);

  const double umax = u.cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, umax);
  const Eigen::VectorXd cres = C * u - b;
  for (int r = 0; r < k; ++r)
    rep.interior_residual = std::max(rep.interior_residual, std::abs(cres(r)) / scale);

  // Same equations in averaged form: (1 + 1/c(x)) u(x) = (P u)(x).
  for (int r = 0; r < k; ++r) {
    const int x = interior[static_cast<size_t>(r)];
    const double cx = net.total_conductance(x);
    double pu = 0.0;
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)])
      pu += nb.c / cx * u(nb.vertex);
    rep.eq_residual =
        std::max(rep.eq_residual, std::abs((1.0 + 1.0 / cx) * u(x) - pu) / scale);
  }

  // Energy accumulated per BFS layer of the deeper endpoint.
  const std::vector<int> layer = bfs_layers(net, net.base());
  int max_layer = 0;
  for (int l : layer) max_layer = std::max(max_layer, l);
  std::vector<double> per_layer(static_cast<size_t>(max_layer) + 1, 0.0);
  for (const Edge& e : net.edges()) {
    const int l = std::max(layer[static_cast<size_t>(e.u)], layer[static_cast<size_t>(e.v)]);
    const double d = u(e.u) - u(e.v);
    per_layer[static_cast<size_t>(l)] += e.c * d * d;
  }
  rep.layer_energy.resize(per_layer.size());
  double acc = 0.0;
  for (size_t l = 0; l < per_layer.size(); ++l) {
    acc += per_layer[l];
    rep.layer_energy[l] = acc;
  }
  rep.energy = acc;

  if (!u.allFinite() || umax > 1e100) {
    rep.classification = Classification::Divergent;
    rep.tail_fraction = 1.0;
    return rep;
  }

  const size_t layers = rep.layer_energy.size();
  const size_t tail_start = layers - std::max<size_t>(1, layers / 4);
  const double head = tail_start > 0 ? rep.layer_energy[tail_start - 1] : 0.0;
  rep.tail_fraction = rep.energy > 0.0 ? (rep.energy - head) / rep.energy : 0.0;
  if (rep.tail_fraction < 1e-6)
    rep.classification = Classification::Convergent;
  else if (rep.tail_fraction > 0.1)
    rep.classification = Classification::Divergent;
  else
    rep.classification = Classification::Inconclusive;
  return rep;
}

GrowthLemmaReport growth_lemma_check(const Network& net, const std::vector<double>& u,
                                     int start, const std::vector<char>& interior_mask,
                                     double slack_tol) {
  net.require_valid();
  if (u.size() != static_cast<size_t>(net.vertex_count()))
    throw UsageError("function length does not match vertex count");
  if (u[static_cast<size_t>(start)] <= 0.0)
    throw UsageError("growth walk must start at a vertex with positive value");

  GrowthLemmaReport rep;
  rep.holds = true;
  rep.min_relative_slack = std::numeric_limits<double>::infinity();
  rep.path.push_back(start);

  int x = start;
  double bound = u[static_cast<size_t>(start)];
  std::vector<char> visited(u.size(), 0);
  visited[static_cast<size_t>(start)] = 1;

  while (interior_mask[static_cast<size_t>(x)]) {
    // The defect equation at x forces the best neighbor to dominate:
    // max_y u(y) >= (P u)(x) = (1 + 1/c(x)) u(x).
    const double cx = net.total_conductance(x);
    const double target = (1.0 + 1.0 / cx) * u[static_cast<size_t>(x)];

    int next = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
      if (u[static_cast<size_t>(nb.vertex)] > best) {
        best = u[static_cast<size_t>(nb.vertex)];
        next = nb.vertex;
      }
    }
    if (next < 0 || visited[static_cast<size_t>(next)]) break;

    const double step_slack = (best - target) / std::max(std::abs(target), 1e-300);
    bound *= 1.0 + 1.0 / cx;
    const double cumulative_slack =
        (best - bound) / std::max(std::abs(bound), 1e-300);
    const double slack = std::min(step_slack, cumulative_slack);
    rep.min_relative_slack = std::min(rep.min_relative_slack, slack);
    if (slack < -slack_tol) rep.holds = false;

    visited[static_cast<size_t>(next)] = 1;
    rep.path.push_back(next);
    x = next;
  }
  if (rep.path.size() == 1) rep.min_relative_slack = 0.0;
  return rep;
}

}  // namespace volta
