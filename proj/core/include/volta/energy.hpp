#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "volta/network.hpp"

namespace volta {

// --------------------------------------------------------------------------
// The energy form. Potentials are value vectors over the canonical vertex
// order and compare modulo additive constants; the energy form ignores
// constants by construction.
//   <u, v>_E = sum over edges of c_xy (u(x) - u(y)) (v(x) - v(y))
// --------------------------------------------------------------------------
double energy_inner(const Network& net, const std::vector<double>& u,
                    const std::vector<double>& v);
double energy_norm2(const Network& net, const std::vector<double>& u);

// Grounded representative: subtract u(base) so the base vertex reads 0.
std::vector<double> grounded(const Network& net, std::vector<double> u);

// --------------------------------------------------------------------------
// Grounded solves. Fixing u(base) = 0 reduces the Laplacian to a symmetric
// positive-definite system over V' = V \ {base}. A direct sparse Cholesky
// factorization is used up to 2000 reduced unknowns; beyond that a conjugate
// gradient solve with relative residual <= 1e-12.
// --------------------------------------------------------------------------
class GroundedSolver {
 public:
  explicit GroundedSolver(const Network& net);
  ~GroundedSolver();
  GroundedSolver(GroundedSolver&&) noexcept;
  GroundedSolver& operator=(GroundedSolver&&) noexcept;

  const Network& network() const { return *net_; }
  int reduced_size() const { return m_; }
  bool iterative() const { return iterative_; }

  int reduced_index(int vertex) const { return red_[static_cast<size_t>(vertex)]; }
  int full_index(int reduced) const { return full_[static_cast<size_t>(reduced)]; }

  // Solve L_red x = b (reduced coordinates).
  Eigen::VectorXd solve_reduced(const Eigen::VectorXd& rhs) const;
  // rhs given over all vertices (base entry ignored); result is the grounded
  // full-length vector.
  std::vector<double> solve_grounded(const std::vector<double>& rhs_full) const;

  const Eigen::SparseMatrix<double>& reduced_laplacian() const { return lred_; }

 private:
  const Network* net_ = nullptr;
  int m_ = 0;
  bool iterative_ = false;
  std::vector<int> red_, full_;
  Eigen::SparseMatrix<double> lred_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// --------------------------------------------------------------------------
// Dipoles. v_xy is the energy-space vector reproducing differences:
// <v_xy, u>_E = u(x) - u(y); it solves (L v)(z) = delta_x(z) - delta_y(z),
// and the grounded representative is unique. v_x := v_{x, base}.
// --------------------------------------------------------------------------
std::vector<double> dipole(const Network& net, int x, int y);

class DipoleSystem {
 public:
  explicit DipoleSystem(const Network& net);

  const Network& network() const { return solver_.network(); }
  const GroundedSolver& solver() const { return solver_; }

  int reduced_size() const { return solver_.reduced_size(); }
  int reduced_index(int vertex) const { return solver_.reduced_index(vertex); }
  int full_index(int reduced) const { return solver_.full_index(reduced); }

  // Grounded values of v_x (x != base). Column x of the inverse reduced
  // Laplacian, extended by 0 at the base.
  std::vector<double> dipole_to_base(int x) const;
  // v_xy = v_x - v_y by superposition; throws UsageError when x == y.
  std::vector<double> dipole(int x, int y) const;

  // Gramian G[r][s] = <v_x, v_y>_E = v_x(y) over V' in reduced coordinates;
  // symmetric positive definite.
  const Eigen::MatrixXd& gramian() const;
  // <v_x, v_y>_E with the convention v_base = 0 (accepts full indices).
  double gramian_ext(int x, int y) const;

  // Effective resistance d_c(x, y) = |v_xy|_E^2.
  double resistance(int x, int y) const;

 private:
  GroundedSolver solver_;
  mutable std::optional<Eigen::MatrixXd> gramian_;
};

double resistance_distance(const Network& net, int x, int y);

// --------------------------------------------------------------------------
// Delta vectors as energy-space elements.
// --------------------------------------------------------------------------
// <delta_x, delta_y>_E = c(x) if x == y, -c_xy on edges, 0 otherwise.
double delta_inner(const Network& net, int x, int y);

// <delta_x, f>_E, cross-checked against (L f)(x); throws VerificationError
// when the two routes disagree beyond `rel_tol` (relative).
double delta_pairing(const Network& net, const std::vector<double>& f, int x,
                     double rel_tol = 1e-10);

// Dipole expansion of delta_x over V': c(x) v_x - sum_{y ~ x} c_xy v_y
// (grounded values; the base neighbor contributes v_base = 0).
std::vector<double> delta_expansion(const DipoleSystem& sys, int x);
// Incident-edge form, valid for every x: sum_{y ~ x} c_xy v_xy.
std::vector<double> delta_expansion_incident(const DipoleSystem& sys, int x);

// --------------------------------------------------------------------------
// The squared-distance kernel N_c(x, y) = |v_x - v_y|_E^2 is conditionally
// negative definite: for mean-zero xi,
//   sum_xy xi_x xi_y N_c(x, y) = -2 |sum_x xi_x v_x|_E^2 <= 0.
// The check evaluates both sides on random mean-zero vectors over all of V
// (v_base = 0) and reports the worst defect.
// --------------------------------------------------------------------------
double squared_distance_kernel(const DipoleSystem& sys, int x, int y);

struct NegativeDefiniteReport {
  int trials = 0;
  double max_identity_defect = 0.0;    // |LHS + 2 |sum xi v|^2| (relative)
  double max_positivity_violation = 0.0;  // max over trials of LHS (should be <= 0)
};

NegativeDefiniteReport negative_definite_check(const DipoleSystem& sys, int trials,
                                               std::uint64_t seed);

}  // namespace volta
