#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volta/energy.hpp"

namespace volta {

// --------------------------------------------------------------------------
// Edge orientation. Exactly one direction per underlying edge.
//  - lexicographic: from < to in canonical vertex order (the default).
//  - current-induced: orient each edge along the current of the reference
//    dipole v_{source,sink}; edges with negligible current (relative to the
//    largest magnitude) keep the lexicographic direction.
// --------------------------------------------------------------------------
struct OrientedEdge {
  int from = 0;
  int to = 0;
  double c = 0.0;
};

struct OrientedEdgeSet {
  std::vector<OrientedEdge> edges;  // one per network edge, edge order preserved
  std::string scheme;               // "lex" or "current:SRC:SINK"
};

OrientedEdgeSet orient_lexicographic(const Network& net);
OrientedEdgeSet orient_current_induced(const DipoleSystem& sys, int source, int sink,
                                       double tie_rel_tol = 1e-12);

// Ohm current through an oriented edge: I(u)_(x,y) = c_xy (u(x) - u(y)).
// Throws UsageError when {x,y} is not an edge.
double current(const Network& net, const std::vector<double>& u, int x, int y);

// --------------------------------------------------------------------------
// The normalized-dipole frame w_e = sqrt(c_e) v_e over the oriented edges.
// It is a Parseval frame for the energy space: analysis is isometric,
// synthesis is its adjoint, and the frame gramian is an orthogonal
// projection of rank |V| - 1. It is an orthonormal basis exactly when the
// network is a tree.
//
// Construction runs a Parseval self-check on the probe set
// {delta_x - delta_base : x in V'} and throws VerificationError if the
// identity fails beyond `check_tol` (relative).
// --------------------------------------------------------------------------
class ParsevalFrame {
 public:
  ParsevalFrame(const DipoleSystem& sys, OrientedEdgeSet oriented,
                double check_tol = 1e-6);

  const Network& network() const { return sys_->network(); }
  const DipoleSystem& dipoles() const { return *sys_; }
  const OrientedEdgeSet& oriented() const { return oriented_; }
  int size() const { return static_cast<int>(oriented_.edges.size()); }

  // Grounded values of w_e, aligned with oriented().edges.
  const std::vector<std::vector<double>>& vectors() const { return vectors_; }

  // Frame coefficients <w_e, u>_E = sqrt(c_e) (u(from) - u(to)) = I(u)_e / sqrt(c_e).
  std::vector<double> analysis(const std::vector<double>& u) const;
  // sum_e coeff_e w_e (grounded values).
  std::vector<double> synthesis(const std::vector<double>& coeffs) const;

  // Gramian <w_e, w_f>_E.
  const Eigen::MatrixXd& gramian() const { return gramian_; }

  // Worst relative Parseval defect observed on the construction probe set.
  double construction_defect() const { return construction_defect_; }

 private:
  const DipoleSystem* sys_;
  OrientedEdgeSet oriented_;
  std::vector<std::vector<double>> vectors_;
  Eigen::MatrixXd gramian_;
  double construction_defect_ = 0.0;
};

struct FrameDiagnostics {
  int edge_count = 0;
  int rank = 0;        // of the gramian (count of eigenvalues > 1/2)
  int redundancy = 0;  // |E| - (|V| - 1)
  double min_norm2 = 0.0;
  double max_norm2 = 0.0;
  double idempotence_defect = 0.0;  // max-abs entry of G^2 - G
  bool is_onb = false;              // all |w_e|^2 within onb_tol of 1
  std::vector<double> norms2;       // per edge
};

FrameDiagnostics frame_diagnostics(const ParsevalFrame& frame, double onb_tol = 1e-9);

}  // namespace volta
