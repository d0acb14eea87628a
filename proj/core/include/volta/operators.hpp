#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "volta/convergence.hpp"
#include "volta/energy.hpp"

namespace volta {

// --------------------------------------------------------------------------
// Coefficient operators between l2(V') and the energy space, as concrete
// matrices over reduced (V') coordinates. The energy-space side is written in
// dipole coordinates: a vector sum_x xi_x v_x is represented by xi.
//
//   K: xi |-> sum_x xi_x v_x          forward = identity, adjoint = gramian
//   L: xi |-> sum_x xi_x delta_x      forward = reduced Laplacian, adjoint = identity
//
// Both are stated on mean-zero coefficient vectors (domain_note); adjointness
// <forward xi, u>_E = <xi, adjoint u>_l2 holds by G = L_red^{-1}.
// --------------------------------------------------------------------------
struct OperatorPair {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd adjoint;
  std::string domain_note;
};

OperatorPair build_K(const DipoleSystem& sys);
OperatorPair build_L(const DipoleSystem& sys);

// Worst relative adjointness defect over random mean-zero coefficient pairs,
// comparing the energy-form edge sum against the coefficient-side pairing:
//   K: <sum xi_x v_x, sum eta_y v_y>_E  vs  xi . (G eta)
//   L: <sum xi_x delta_x, sum eta_y v_y>_E  vs  xi . eta
double adjointness_defect_K(const DipoleSystem& sys, int trials = 100,
                            std::uint64_t seed = 42);
double adjointness_defect_L(const DipoleSystem& sys, int trials = 100,
                            std::uint64_t seed = 42);

// --------------------------------------------------------------------------
// Factorization of the energy-form Laplacian through L: the composition L L*
// agrees with the Laplacian on the mean-zero dipole span. The report carries
// the operator's matrices over the mean-zero basis {v_x - v_xref : x in V',
// x != xref} (xref = first element of V'):
//   form[i][j]   = <phi_i, L phi_j>_E  (identity-plus-ones, exactly)
//   metric[i][j] = <phi_i, phi_j>_E
// and the generalized spectrum of (form, metric) — the spectrum of the
// positive selfadjoint extension in the energy geometry.
// --------------------------------------------------------------------------
struct FriedrichsReport {
  Eigen::MatrixXd form;
  Eigen::MatrixXd metric;
  std::vector<double> spectrum;      // ascending
  double factorization_defect = 0.0; // max |(L u)(z) - (sum xi_x delta_x)(z)|
  int defect_vertex = -1;
  double quadratic_form_defect = 0.0;  // worst relative |<phi, L phi>_E - sum xi^2|
};

// Verifies the factorization on `probes` random mean-zero coefficient vectors
// (unit sup-norm); throws VerificationError when the defect exceeds `tol`.
FriedrichsReport friedrichs_matrix(const DipoleSystem& sys, int probes = 20,
                                   std::uint64_t seed = 42, double tol = 1e-8);

// Divergence identity of the gramian: applying the Laplacian in the second
// argument of <v_x, v_.> and evaluating at z gives delta_xz. Returns the max
// absolute defect over x, z in V'.
double greens_gauss_check(const DipoleSystem& sys);

// --------------------------------------------------------------------------
// Transition operator P[x][y] = p_xy = c_xy / c(x). Verified facts:
//   - L = diag(c)(I - P) entrywise;
//   - D^{1/2} P D^{-1/2} is symmetric (selfadjointness in l2(c));
//   - spectrum real, spectral radius <= 1, eigenvalue 1 attained (constants);
//   - rows sum to 1.
// --------------------------------------------------------------------------
struct TransitionReport {
  Eigen::MatrixXd P;
  double symmetrized_asymmetry = 0.0;
  double factorization_defect = 0.0;  // max-abs of L - diag(c)(I - P)
  double row_sum_defect = 0.0;
  double spectral_radius = 0.0;
  std::vector<double> eigenvalues;  // of the symmetrized operator, ascending
};

TransitionReport transition_operator(const Network& net);

// P acts on dipoles by averaging: P v_x = sum_y p_xy v_y (with v_base = 0).
// As grounded values on V' the identity is exact; the full functions differ
// by the x-independent spike 1_base / c(base), which cancels on mean-zero
// combinations — the statement that P preserves the mean-zero dipole span.
//   max_pointwise_defect  worst |P v_x - sum_y p_xy v_y| over V', per dipole
//   max_energy_defect     worst relative energy-norm defect of
//                         P(sum xi_x v_x) = sum_x xi_x sum_y p_xy v_y
//                         over random mean-zero xi
//   max_meanzero_defect   worst |sum_y (sum_x xi_x p_xy)| for mean-zero xi
struct PDipoleReport {
  double max_pointwise_defect = 0.0;
  double max_energy_defect = 0.0;
  double max_meanzero_defect = 0.0;
};

PDipoleReport p_on_dipoles_check(const DipoleSystem& sys, int trials = 20,
                                 std::uint64_t seed = 42);

// --------------------------------------------------------------------------
// Deficiency probe on a finite truncation of an infinite model: the
// least-energy solution of (L + I)u = 0 enforced on a declared interior
// vertex set (free boundary), pinned by one normalizing linear constraint.
// Solved as an equality-constrained quadratic program through a dense KKT
// system with partially pivoted LU — the formulation that stays stable when
// the defect spans many orders of magnitude.
//
// The energy is accumulated over breadth-first layers from the base; the
// classification looks at the tail fraction contributed by the last quarter
// of the layers: < 1e-6 of the total reads "convergent" (finite-energy
// indicator), > 0.1 reads "divergent", anything else is inconclusive, and
// nonfinite or absurdly large solutions (|u| > 1e100) are divergent.
// --------------------------------------------------------------------------
struct AnchorConstraint {
  std::vector<std::pair<int, double>> terms;  // sum coeff * u(vertex) = rhs
  double rhs = 1.0;
};

struct DeficiencyProbeReport {
  std::vector<double> u;          // solved defect values, canonical order
  double interior_residual = 0.0; // max |((L + I)u)(x)|, relative to max(1, |u|_inf)
  double eq_residual = 0.0;       // max |(1 + 1/c(x)) u(x) - (P u)(x)|, same scale
  std::vector<double> layer_energy;  // cumulative energy by BFS layer
  double energy = 0.0;
  double tail_fraction = 0.0;
  Classification classification = Classification::Inconclusive;
};

DeficiencyProbeReport deficiency_probe(const Network& net,
                                       const std::vector<char>& interior_mask,
                                       const AnchorConstraint& anchor);

// --------------------------------------------------------------------------
// Growth bound along a greedy steepest-ascent walk: starting from a vertex
// with u > 0 whose defect equation holds, each step to the largest neighbor
// satisfies u(x_{k+1}) >= (1 + 1/c(x_k)) u(x_k), hence the cumulative product
// bound u(x_k) >= prod_i (1 + 1/c(x_i)) * u(start). Verified with relative
// slack `slack_tol` while the walk stays inside `interior_mask`.
// --------------------------------------------------------------------------
struct GrowthLemmaReport {
  bool holds = false;
  double min_relative_slack = 0.0;  // most negative observed slack
  std::vector<int> path;
};

GrowthLemmaReport growth_lemma_check(const Network& net, const std::vector<double>& u,
                                     int start, const std::vector<char>& interior_mask,
                                     double slack_tol = 1e-10);

}  // namespace volta
