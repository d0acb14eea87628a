#include "volta/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volta/errors.hpp"
#include "volta/format.hpp"

namespace volta {

OrientedEdgeSet orient_lexicographic(const Network& net) {
  net.require_valid();
  OrientedEdgeSet out;
  out.scheme = "lex";
  out.edges.reserve(net.edges().size());
  for (const Edge& e : net.edges()) out.edges.push_back({e.u, e.v, e.c});
  return out;
}

OrientedEdgeSet orient_current_induced(const DipoleSystem& sys, int source, int sink,
                                       double tie_rel_tol) {
  const Network& net = sys.network();
  if (source == sink) throw UsageError("current-induced orientation needs source != sink");
  const std::vector<double> v = sys.dipole(source, sink);

  double max_abs = 0.0;
  std::vector<double> flow(net.edges().size(), 0.0);
  for (size_t k = 0; k < net.edges().size(); ++k) {
    const Edge& e = net.edges()[k];
    flow[k] = e.c * (v[static_cast<size_t>(e.u)] - v[static_cast<size_t>(e.v)]);
    max_abs = std::max(max_abs, std::abs(flow[k]));
  }

  OrientedEdgeSet out;
  out.scheme = "current:" + net.name(source) + ":" + net.name(sink);
  out.edges.reserve(net.edges().size());
  const double cutoff = tie_rel_tol * max_abs;
  for (size_t k = 0; k < net.edges().size(); ++k) {
    const Edge& e = net.edges()[k];
    // Positive flow runs u -> v; negligible flow keeps the canonical direction.
    if (flow[k] < -cutoff)
      out.edges.push_back({e.v, e.u, e.c});
    else
      out.edges.push_back({e.u, e.v, e.c});
  }
  return out;
}

double current(const Network& net, const std::vector<double>& u, int x, int y) {
  if (!net.has_edge(x, y))
    throw UsageError("no edge between \"" + net.name(x) + "\" and \"" + net.name(y) + "\"");
  const double c = net.conductance(x, y);
  return c * (u[static_cast<size_t>(x)] - u[static_cast<size_t>(y)]);
}

// ---------------------------------------------------------------------------
// ParsevalFrame
// ---------------------------------------------------------------------------

ParsevalFrame::ParsevalFrame(const DipoleSystem& sys, OrientedEdgeSet oriented,
                             double check_tol)
    : sys_(&sys), oriented_(std::move(oriented)) {
  const Network& net = sys.network();
  if (oriented_.edges.size() != net.edges().size())
    throw UsageError("oriented edge set does not match the network edge list");

  const size_t n = static_cast<size_t>(net.vertex_count());
  const int m = size();
  vectors_.reserve(static_cast<size_t>(m));
  for (const OrientedEdge& e : oriented_.edges) {
    std::vector<double> w = sys.dipole(e.from, e.to);
    const double s = std::sqrt(e.c);
    for (double& val : w) val *= s;
    vectors_.push_back(std::move(w));
  }

  // <w_e, w_f>_E = sqrt(c_e) (w_f(from_e) - w_f(to_e)).
  gramian_.resize(m, m);
  for (int a = 0; a < m; ++a) {
    const OrientedEdge& e = oriented_.edges[static_cast<size_t>(a)];
    const double s = std::sqrt(e.c);
    for (int b = 0; b < m; ++b) {
      const std::vector<double>& wf = vectors_[static_cast<size_t>(b)];
      gramian_(a, b) =
          s * (wf[static_cast<size_t>(e.from)] - wf[static_cast<size_t>(e.to)]);
    }
  }

  // Parseval self-check: the base dipoles v_{x, base}, x in V', span the
  // whole energy space, so verifying sum_e <w_e, u> w_e = u on each of them
  // verifies the reconstruction identity everywhere.
  for (int x = 0; x < net.vertex_count(); ++x) {
    if (x == net.base()) continue;
    std::vector<double> u = sys.dipole(x, net.base());
    const std::vector<double> back = synthesis(analysis(u));
    double defect = 0.0, scale = 0.0;
    for (size_t i = 0; i < n; ++i) {
      defect = std::max(defect, std::abs(back[i] - u[i]));
      scale = std::max(scale, std::abs(u[i]));
    }
    const double rel = defect / std::max(scale, 1e-300);
    construction_defect_ = std::max(construction_defect_, rel);
  }
  if (construction_defect_ > check_tol)
    throw VerificationError("frame reconstruction defect " + fmt_g12(construction_defect_) +
                            " exceeds tolerance " + fmt_g12(check_tol));
}

std::vector<double> ParsevalFrame::analysis(const std::vector<double>& u) const {
  const Network& net = sys_->network();
  if (u.size() != static_cast<size_t>(net.vertex_count()))
    throw UsageError("function length does not match vertex count");
  std::vector<double> coeffs(oriented_.edges.size());
  for (size_t k = 0; k < oriented_.edges.size(); ++k) {
    const OrientedEdge& e = oriented_.edges[k];
    coeffs[k] = std::sqrt(e.c) *
                (u[static_cast<size_t>(e.from)] - u[static_cast<size_t>(e.to)]);
  }
  return coeffs;
}

std::vector<double> ParsevalFrame::synthesis(const std::vector<double>& coeffs) const {
  if (coeffs.size() != oriented_.edges.size())
    throw UsageError("coefficient length does not match edge count");
  const size_t n = static_cast<size_t>(sys_->network().vertex_count());
  std::vector<double> out(n, 0.0);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const std::vector<double>& w = vectors_[k];
    for (size_t i = 0; i < n; ++i) out[i] += coeffs[k] * w[i];
  }
  return out;
}

FrameDiagnostics frame_diagnostics(const ParsevalFrame& frame, double onb_tol) {
  FrameDiagnostics d;
  d.edge_count = frame.size();
  const Network& net = frame.network();
  d.redundancy = d.edge_count - (net.vertex_count() - 1);

  const Eigen::MatrixXd& G = frame.gramian();
  const Eigen::MatrixXd Gs = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gs);
  if (es.info() != Eigen::Success)
    throw VerificationError("frame gramian eigensolve failed");
  d.rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) ++d.rank;

  d.idempotence_defect = (G * G - G).cwiseAbs().maxCoeff();

  d.norms2.resize(static_cast<size_t>(d.edge_count));
  d.min_norm2 = std::numeric_limits<double>::infinity();
  d.max_norm2 = 0.0;
  for (int e = 0; e < d.edge_count; ++e) {
    const double n2 = G(e, e);
    d.norms2[static_cast<size_t>(e)] = n2;
    d.min_norm2 = std::min(d.min_norm2, n2);
    d.max_norm2 = std::max(d.max_norm2, n2);
  }
  d.is_onb = d.min_norm2 >= 1.0 - onb_tol && d.max_norm2 <= 1.0 + onb_tol &&
             d.redundancy == 0;
  return d;
}

}  // namespace volta
