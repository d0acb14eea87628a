#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace volta {

// --------------------------------------------------------------------------
// Plain data description of a weighted network, as read from / written to a
// network document. Vertices are opaque strings; `base` is the grounding
// vertex; each edge is an unordered pair with a positive conductance.
// --------------------------------------------------------------------------
struct EdgeData {
  std::string u;
  std::string v;
  double c = 0.0;
};

struct NetworkData {
  std::vector<std::string> vertices;
  std::string base;
  std::vector<EdgeData> edges;
};

// Canonical total order on vertex identifiers: shorter strings first, ties
// broken lexicographically. Decimal integer names without leading zeros sort
// numerically under this order.
bool shortlex_less(const std::string& a, const std::string& b);

// An edge in canonical index form; u < v in canonical vertex order.
struct Edge {
  int u = 0;
  int v = 0;
  double c = 0.0;
};

struct Neighbor {
  int vertex = 0;
  double c = 0.0;  // conductance of the incident edge (or a transition weight)
};

class ValidationReport {
 public:
  void add(std::string line) { lines_.push_back(std::move(line)); }
  bool ok() const { return lines_.empty(); }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

// --------------------------------------------------------------------------
// Immutable canonical form of a network. Construction never throws on
// mathematical defects: every problem is recorded in the validation report,
// and operations that need a valid network call require_valid().
// --------------------------------------------------------------------------
class Network {
 public:
  static Network from_data(const NetworkData& data);

  const ValidationReport& validation() const { return report_; }
  bool valid() const { return report_.ok(); }
  // Throws ValidationError with the first recorded problem.
  void require_valid() const;

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int base() const { return base_; }

  // Vertex names in canonical (shortlex) order; all indices refer to it.
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int x) const { return names_[static_cast<size_t>(x)]; }
  int index_of(const std::string& name) const;  // -1 if absent
  int require_vertex(const std::string& name) const;  // throws UsageError

  // Edges sorted by (u, v); u < v.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::vector<Neighbor>>& adjacency() const { return adj_; }
  bool has_edge(int x, int y) const;
  double conductance(int x, int y) const;  // 0 when {x,y} is not an edge
  // c(x) = sum of conductances of edges incident to x.
  double total_conductance(int x) const { return total_c_[static_cast<size_t>(x)]; }

  // Canonical-order round trip back to plain data.
  NetworkData to_data() const;

 private:
  Network() = default;

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<double> total_c_;
  int base_ = 0;
  ValidationReport report_;
};

// Report-style validation of arbitrary candidate input (never throws).
ValidationReport validate(const NetworkData& data);

// --------------------------------------------------------------------------
// Random-walk data: total conductances c(x) and transition probabilities
// p_xy = c_xy / c(x). Rows are stochastic and the walk is reversible with
// respect to c: c(x) p_xy = c_xy = c(y) p_yx.
// --------------------------------------------------------------------------
struct WalkData {
  std::vector<double> total_conductance;           // c(x)
  std::vector<std::vector<Neighbor>> transition;   // transition[x] = {(y, p_xy)}

  double probability(int x, int y) const;  // 0 when y is not a neighbor of x
};

WalkData walk_data(const Network& net);

// Dense transition matrix P[x][y] = p_xy in canonical order.
Eigen::MatrixXd transition_dense(const Network& net);

// --------------------------------------------------------------------------
// Reconstruction of a network from reversible walk data: c_xy := c~(x) p_xy.
// Rejects input whose reversibility defect exceeds `rel_tol` (relative),
// naming the first violating edge.
// --------------------------------------------------------------------------
struct WalkInput {
  std::vector<std::string> vertices;
  std::string base;
  // Directed entries (x, y, p_xy); both directions of an edge must appear.
  std::vector<std::tuple<std::string, std::string, double>> transitions;
  // Vertex weights c~(x), aligned with `vertices`.
  std::vector<double> vertex_weight;
};

Network conductance_from_walk(const WalkInput& input, double rel_tol = 1e-12);

// --------------------------------------------------------------------------
// Graph Laplacian. (Lu)(x) = sum_{y ~ x} c_xy (u(x) - u(y)).
// --------------------------------------------------------------------------
std::vector<double> laplacian_apply(const Network& net, const std::vector<double>& u);

// Matrix of the Laplacian over an explicit vertex ordering (a permutation of
// the vertex names; throws UsageError otherwise).
Eigen::MatrixXd laplacian_matrix(const Network& net, const std::vector<std::string>& ordering);
// Canonical ordering.
Eigen::MatrixXd laplacian_matrix(const Network& net);
Eigen::SparseMatrix<double> laplacian_sparse(const Network& net);

}  // namespace volta
