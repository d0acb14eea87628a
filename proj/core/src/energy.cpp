#include "volta/energy.hpp"

#include <cmath>
#include <random>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "volta/errors.hpp"
#include "volta/format.hpp"

namespace volta {

double energy_inner(const Network& net, const std::vector<double>& u,
                    const std::vector<double>& v) {
  net.require_valid();
  const size_t n = static_cast<size_t>(net.vertex_count());
  if (u.size() != n || v.size() != n)
    throw UsageError("function length does not match vertex count");
  double acc = 0.0;
  for (const Edge& e : net.edges()) {
    const auto su = static_cast<size_t>(e.u);
    const auto sv = static_cast<size_t>(e.v);
    acc += e.c * (u[su] - u[sv]) * (v[su] - v[sv]);
  }
  return acc;
}

double energy_norm2(const Network& net, const std::vector<double>& u) {
  return energy_inner(net, u, u);
}

std::vector<double> grounded(const Network& net, std::vector<double> u) {
  const double offset = u[static_cast<size_t>(net.base())];
  for (double& x : u) x -= offset;
  return u;
}

// ---------------------------------------------------------------------------
// GroundedSolver
// ---------------------------------------------------------------------------

namespace {
constexpr int kDirectSolveLimit = 2000;
constexpr double kIterativeTol = 1e-13;
}  // namespace

struct GroundedSolver::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
};

GroundedSolver::GroundedSolver(const Network& net) : net_(&net), impl_(new Impl) {
  net.require_valid();
  const int n = net.vertex_count();
  m_ = n - 1;
  red_.assign(static_cast<size_t>(n), -1);
  full_.resize(static_cast<size_t>(m_));
  int r = 0;
  for (int x = 0; x < n; ++x) {
    if (x == net.base()) continue;
    red_[static_cast<size_t>(x)] = r;
    full_[static_cast<size_t>(r)] = x;
    ++r;
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m_) + 2 * net.edges().size());
  for (int x = 0; x < n; ++x) {
    if (x == net.base()) continue;
    trips.emplace_back(red_[static_cast<size_t>(x)], red_[static_cast<size_t>(x)],
                       net.total_conductance(x));
  }
  for (const Edge& e : net.edges()) {
    const int ru = red_[static_cast<size_t>(e.u)];
    const int rv = red_[static_cast<size_t>(e.v)];
    if (ru < 0 || rv < 0) continue;
    trips.emplace_back(ru, rv, -e.c);
    trips.emplace_back(rv, ru, -e.c);
  }
  lred_.resize(m_, m_);
  lred_.setFromTriplets(trips.begin(), trips.end());

  iterative_ = m_ > kDirectSolveLimit;
  if (iterative_) {
    impl_->cg.setTolerance(kIterativeTol);
    impl_->cg.setMaxIterations(20LL * m_);
    impl_->cg.compute(lred_);
    if (impl_->cg.info() != Eigen::Success)
      throw ValidationError("grounded system rejected by the iterative solver");
  } else {
    impl_->ldlt.compute(lred_);
    if (impl_->ldlt.info() != Eigen::Success)
      throw ValidationError("grounded system is singular (network not connected?)");
  }
}

GroundedSolver::~GroundedSolver() = default;
GroundedSolver::GroundedSolver(GroundedSolver&&) noexcept = default;
GroundedSolver& GroundedSolver::operator=(GroundedSolver&&) noexcept = default;

Eigen::VectorXd GroundedSolver::solve_reduced(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x;
  if (iterative_) {
    x = impl_->cg.solve(rhs);
    if (impl_->cg.info() != Eigen::Success)
      throw VerificationError("iterative grounded solve did not converge");
    const double res = (lred_ * x - rhs).norm();
    const double scale = std::max(rhs.norm(), 1e-300);
    if (res > 1e-12 * scale * 10.0)
      throw VerificationError("iterative grounded solve residual too large: " +
                              fmt_g12(res / scale));
  } else {
    x = impl_->ldlt.solve(rhs);
    if (impl_->ldlt.info() != Eigen::Success)
      throw VerificationError("grounded direct solve failed");
  }
  return x;
}

std::vector<double> GroundedSolver::solve_grounded(const std::vector<double>& rhs_full) const {
  if (rhs_full.size() != static_cast<size_t>(net_->vertex_count()))
    throw UsageError("right-hand side length does not match vertex count");
  Eigen::VectorXd rhs(m_);
  for (int r = 0; r < m_; ++r) rhs(r) = rhs_full[static_cast<size_t>(full_[static_cast<size_t>(r)])];
  const Eigen::VectorXd x = solve_reduced(rhs);
  std::vector<double> out(rhs_full.size(), 0.0);
  for (int r = 0; r < m_; ++r) out[static_cast<size_t>(full_[static_cast<size_t>(r)])] = x(r);
  return out;
}

// ---------------------------------------------------------------------------
// Dipoles
// ---------------------------------------------------------------------------

std::vector<double> dipole(const Network& net, int x, int y) {
  if (x == y) throw UsageError("dipole endpoints must differ");
  GroundedSolver solver(net);
  std::vector<double> rhs(static_cast<size_t>(net.vertex_count()), 0.0);
  rhs[static_cast<size_t>(x)] += 1.0;
  rhs[static_cast<size_t>(y)] -= 1.0;
  return solver.solve_grounded(rhs);
}

DipoleSystem::DipoleSystem(const Network& net) : solver_(net) {}

std::vector<double> DipoleSystem::dipole_to_base(int x) const {
  if (x == network().base()) throw UsageError("dipole endpoints must differ");
  std::vector<double> rhs(static_cast<size_t>(network().vertex_count()), 0.0);
  rhs[static_cast<size_t>(x)] = 1.0;
  return solver_.solve_grounded(rhs);
}

std::vector<double> DipoleSystem::dipole(int x, int y) const {
  if (x == y) throw UsageError("dipole endpoints must differ");
  std::vector<double> rhs(static_cast<size_t>(network().vertex_count()), 0.0);
  rhs[static_cast<size_t>(x)] += 1.0;
  rhs[static_cast<size_t>(y)] -= 1.0;
  return solver_.solve_grounded(rhs);
}

const Eigen::MatrixXd& DipoleSystem::gramian() const {
  if (!gramian_) {
    const int m = solver_.reduced_size();
    Eigen::MatrixXd G(m, m);
    for (int s = 0; s < m; ++s) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      rhs(s) = 1.0;
      G.col(s) = solver_.solve_reduced(rhs);
    }
    // Symmetrize away factorization round-off; G is mathematically symmetric.
    gramian_ = 0.5 * (G + G.transpose());
  }
  return *gramian_;
}

double DipoleSystem::gramian_ext(int x, int y) const {
  const int b = network().base();
  if (x == b || y == b) return 0.0;
  const Eigen::MatrixXd& G = gramian();
  return G(reduced_index(x), reduced_index(y));
}

double DipoleSystem::resistance(int x, int y) const {
  if (x == y) return 0.0;
  return gramian_ext(x, x) + gramian_ext(y, y) - 2.0 * gramian_ext(x, y);
}

double resistance_distance(const Network& net, int x, int y) {
  if (x == y) return 0.0;
  const std::vector<double> v = dipole(net, x, y);
  return energy_norm2(net, v);
}

// ---------------------------------------------------------------------------
// Delta vectors
// ---------------------------------------------------------------------------

double delta_inner(const Network& net, int x, int y) {
  net.require_valid();
  if (x == y) return net.total_conductance(x);
  const double c = net.conductance(x, y);
  return c > 0.0 ? -c : 0.0;
}

double delta_pairing(const Network& net, const std::vector<double>& f, int x,
                     double rel_tol) {
  std::vector<double> deltax(f.size(), 0.0);
  deltax[static_cast<size_t>(x)] = 1.0;
  const double via_energy = energy_inner(net, deltax, f);
  const double via_laplacian = laplacian_apply(net, f)[static_cast<size_t>(x)];
  const double scale = std::max({std::abs(via_energy), std::abs(via_laplacian), 1.0});
  if (std::abs(via_energy - via_laplacian) > rel_tol * scale)
    throw VerificationError("delta pairing mismatch at vertex " + net.name(x) + ": " +
                            fmt_g12(via_energy) + " vs " + fmt_g12(via_laplacian));
  return via_energy;
}

std::vector<double> delta_expansion(const DipoleSystem& sys, int x) {
  const Network& net = sys.network();
  if (x == net.base()) throw UsageError("delta expansion over V' needs x != base");
  const size_t n = static_cast<size_t>(net.vertex_count());
  std::vector<double> out(n, 0.0);
  auto add_scaled = [&out, n](const std::vector<double>& v, double s) {
    for (size_t i = 0; i < n; ++i) out[i] += s * v[i];
  };
  add_scaled(sys.dipole_to_base(x), net.total_conductance(x));
  for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
    if (nb.vertex == net.base()) continue;  // v_base = 0
    add_scaled(sys.dipole_to_base(nb.vertex), -nb.c);
  }
  return out;
}

std::vector<double> delta_expansion_incident(const DipoleSystem& sys, int x) {
  const Network& net = sys.network();
  const size_t n = static_cast<size_t>(net.vertex_count());
  std::vector<double> out(n, 0.0);
  for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
    const std::vector<double> vxy = sys.dipole(x, nb.vertex);
    for (size_t i = 0; i < n; ++i) out[i] += nb.c * vxy[i];
  }
  return out;
}

double squared_distance_kernel(const DipoleSystem& sys, int x, int y) {
  return sys.resistance(x, y);
}

NegativeDefiniteReport negative_definite_check(const DipoleSystem& sys, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw UsageError("negative_definite_check needs trials >= 1");
  const Network& net = sys.network();
  const int n = net.vertex_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  NegativeDefiniteReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> xi(static_cast<size_t>(n));
    double mean = 0.0;
    for (double& v : xi) mean += (v = unif(rng));
    mean /= n;
    for (double& v : xi) v -= mean;  // sum_x xi_x = 0

    double lhs = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        lhs += xi[static_cast<size_t>(a)] * xi[static_cast<size_t>(b)] * sys.resistance(a, b);
      }
    }
    // sum_x xi_x v_x with v_base = 0: grounded values from the gramian columns.
    std::vector<double> combo(static_cast<size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) {
      if (a == net.base()) continue;
      for (int b = 0; b < n; ++b) {
        if (b == net.base()) continue;
        // v_a evaluated at b equals <v_a, v_b> for grounded representatives.
        combo[static_cast<size_t>(b)] += xi[static_cast<size_t>(a)] * sys.gramian_ext(a, b);
      }
    }
    const double rhs = -2.0 * energy_norm2(net, combo);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    rep.max_identity_defect = std::max(rep.max_identity_defect, std::abs(lhs - rhs) / scale);
    rep.max_positivity_violation = std::max(rep.max_positivity_violation, lhs);
  }
  return rep;
}

}  // namespace volta
