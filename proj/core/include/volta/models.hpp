#pragma once

#include <functional>
#include <string>
#include <vector>

#include "volta/convergence.hpp"
#include "volta/network.hpp"
#include "volta/operators.hpp"

namespace volta {

// --------------------------------------------------------------------------
// Generators for the example families. All of them produce networks that pass
// validation and run through the generic pipeline (dipoles, frames,
// factorization, probes).
// --------------------------------------------------------------------------

// Nearest-neighbor path on vertices "0".."N" with c_{n-1,n} = a[n-1]
// (N = a.size()).
NetworkData path_network(const std::vector<double>& a);

// Geometric path: a_n = Q^n, vertices "0".."N".
NetworkData geometric_network(double Q, int N);

// Binary tree of words over {0,1} up to length `depth`. Vertex names prefix
// the word with "o" (root = "o") so the canonical shortlex order is exactly
// the level order. Edge (x, xi) carries conductance w(x) * p_i, where the
// vertex weight is w(x) = p0^{F0} p1^{F1} / pm^{|x|} and w(root) = 1; the
// induced walk is reversible by construction.
NetworkData binary_tree_network(double p0, double p1, double pm, int depth);

// Vertex weight w(x) for the tree word encoded in a vertex name ("o" + word).
double tree_vertex_weight(double p0, double p1, double pm, const std::string& name);

// Reversibility defect of the declared tree walk: max relative
// |w(x) p(x->y) - c_xy| over both directions of every edge (p is pm toward
// the root, p0/p1 away from it).
double tree_reversibility_defect(const Network& net, double p0, double p1, double pm);

// Two geometric rails "a0".."aN" (c = Q^n) and "b0".."bN" (c = Qbar^n) with
// vertical rungs of conductance `rung` at every column; base "a0".
NetworkData lattice_strip_network(double Q, double Qbar, int N, double rung = 1.0);

// Complete graph on "0", "1", "2" with the three conductances; base "2".
NetworkData triangle_network(double c01, double c02, double c12);

// --------------------------------------------------------------------------
// Path closed forms. For x < y the dipole representative that vanishes left
// of x is v_xy(z) = 0 (z <= x), -sum_{k=x+1}^{z} 1/a_k (x < z < y), and
// -sum_{k=x+1}^{y} 1/a_k (z >= y); the resistance metric is the resistor
// series dist(x, y) = sum_{x < k <= y} 1/a_k.
// --------------------------------------------------------------------------
std::vector<double> path_dipole_closed_form(const std::vector<double>& a, int x, int y);
double path_distance_closed_form(const std::vector<double>& a, int x, int y);

// --------------------------------------------------------------------------
// Series probes on a doubling checkpoint schedule (10, 20, 40, ... <= n_max).
// --------------------------------------------------------------------------
struct SeriesProbe {
  std::vector<std::pair<long long, double>> checkpoints;  // (N, partial sum)
  Classification classification = Classification::Inconclusive;
};

// Partial sums of sum_n 1/a(n): the metric-boundedness test for the path
// with conductances a(n).
SeriesProbe bounded_metric_probe(const std::function<double(long long)>& a,
                                 long long n_max);

// Quadratic-form domain test on the geometric path: partial sums of
// sum_x |f(x) - f(x+1)|^2 Q^{2x}. The reciprocal-geometric function
// f(x) = Q^{-x} yields constant terms, hence a divergent series: it carries
// finite energy but sits outside the operator domain.
SeriesProbe friedrichs_domain_series(double Q, const std::function<double(long long)>& f,
                                     long long n_max);

// --------------------------------------------------------------------------
// Half-line recurrences, marched in flux form. With J_n = a_n (u_n - u_{n-1})
// the defect equation L u = -u on vertices 0..n-1 becomes
//   J_1 = u_0,  u_n = u_{n-1} + J_n / a_n,  J_{n+1} = J_n + u_n,
// and the eigenvalue equation L f = lambda-like f (geometric conductances,
// coefficient written as lambda / Q^n in the value recurrence) becomes
//   J_1 = -lambda f_0,  f_n = f_{n-1} + J_n / a_n,  J_{n+1} = J_n - Q lambda f_n.
// The flux form is an exact algebraic reorganization of the three-term value
// recurrences and stays stable where the naive linear-system route loses all
// precision.
//
// Energy partial sums E_n = sum_{k<=n} J_k^2 / a_k are recorded at doubling
// checkpoints {N, 2N, 4N, 8N, 16N} and classified with the Cauchy-increment
// rule; a march that overflows (nonfinite or |u| > 1e100) classifies as
// divergent. The step-N transfer matrix [[t, -s], [1, 0]] of the value
// recurrence (t = (a_N + a_{N+1} + eps)/a_{N+1}, s = a_N/a_{N+1}) has
// eigenvalues tending to {1, 1/Q} on the geometric path; both are reported.
// --------------------------------------------------------------------------
struct RecurrenceRow {
  long long n = 0;
  double value = 0.0;         // u_n (defect) or f_n (eigenfunction)
  double ratio = 0.0;         // difference ratio / value ratio; see report kind
  bool ratio_defined = false;
  double energy_partial = 0.0;
};

struct RecurrenceReport {
  std::vector<RecurrenceRow> rows;  // n = 0..N
  std::vector<std::pair<long long, double>> energy_checkpoints;
  Classification energy_classification = Classification::Inconclusive;
  double transfer_lo = 0.0;  // smaller transfer-matrix eigenvalue at step N
  double transfer_hi = 0.0;
  bool overflowed = false;
  long long overflow_at = -1;
};

// Defect recurrence for arbitrary positive conductances a(n), seeded by the
// vertex-0 equation (u_0 = 1, J_1 = u_0). Rows carry the difference ratio
// (u_n - u_{n-1}) / (u_{n-1} - u_{n-2}).
RecurrenceReport deficiency_recurrence(const std::function<double(long long)>& a,
                                       long long N);
// Geometric conductances a_n = Q^n.
RecurrenceReport deficiency_recurrence_geometric(double Q, long long N);

// Eigenfunction recurrence on the geometric path. Rows carry the value ratio
// f_n / f_{n-1}. lambda = 0 is seeded with the harmonic pair (1, 1/Q) —
// the generic vertex-0 seed produces constants, which are the zero of the
// energy space — and then reproduces Q^{-n} exactly.
RecurrenceReport eigenfunction_recurrence(double Q, double lambda, long long N);

// --------------------------------------------------------------------------
// The reciprocal-geometric harmonic function u_n = Q^{-n} (Q > 1): fixed
// point of the transition operator at interior vertices, finite energy with
// truncated value (Q - 1)(1 - Q^{-N}) -> Q - 1.
// --------------------------------------------------------------------------
struct HarmonicReport {
  std::vector<double> values;
  double truncated_energy = 0.0;    // numerically accumulated
  double closed_form_energy = 0.0;  // (Q - 1)(1 - Q^{-N})
  double limit_energy = 0.0;        // Q - 1
  double p_fixed_residual = 0.0;    // max interior |(P u)(n) - u(n)|
};

HarmonicReport harmonic_geometric(double Q, int N);  // UsageError when Q <= 1

// --------------------------------------------------------------------------
// Tree defect experiment: least-energy solution of (L + I)u = 0 on interior
// vertices with the anchored normalization u("o0") - u("o1") = 1, tracked
// across depths. Raw energies grow in both regimes of interest; the regimes
// separate through the growth-rate ratios E_D / E_{D-1}: a monotonically
// decreasing sequence indicates finite defect energy in the infinite tree
// ("finite"), a monotonically increasing one indicates infinite defect energy
// ("infinite"); anything else reports "inconclusive". This is a numerical
// experiment, not a proof.
// --------------------------------------------------------------------------
struct TreeProbeReport {
  std::vector<int> depths;
  std::vector<double> energies;
  std::vector<double> ratios;  // energies[i] / energies[i-1]
  std::string trend;           // "finite" | "infinite" | "inconclusive"
  double max_relative_residual = 0.0;
  double reversibility_defect = 0.0;       // at the deepest truncation
  std::vector<double> deepest_defect;      // u at depth_max (canonical order)
};

TreeProbeReport tree_deficiency_probe(double p0, double p1, double pm,
                                      int depth_min = 5, int depth_max = 8);

// --------------------------------------------------------------------------
// Triangle spectrum in closed form. With s = (c01, c02, c12),
// t1 = (c01, c01, c02), t2 = (c02, c12, c12):
//   lambda_1 = 0,
//   lambda_{2,3} = sum(s) -/+ sqrt(|s|^2 - <t1, t2>),
//   gap = lambda_3 - lambda_2 = 2 sqrt(|s|^2 - <t1, t2>),
// cross-checked against a direct eigendecomposition of the 3x3 Laplacian.
// --------------------------------------------------------------------------
struct TriangleSpectrumReport {
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  double gap = 0.0;
  double crosscheck_defect = 0.0;
};

TriangleSpectrumReport triangle_spectrum(double c01, double c02, double c12);

}  // namespace volta
