#include "volta/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "volta/errors.hpp"
#include "volta/format.hpp"

namespace volta {

bool shortlex_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string edge_label(const std::string& a, const std::string& b) {
  return "{" + quoted(a) + "," + quoted(b) + "}";
}

}  // namespace

Network Network::from_data(const NetworkData& data) {
  Network net;
  ValidationReport& rep = net.report_;

  // Canonical vertex set.
  std::vector<std::string> names = data.vertices;
  std::sort(names.begin(), names.end(), shortlex_less);
  for (size_t i = 1; i < names.size(); ++i) {
    if (names[i] == names[i - 1]) rep.add("duplicate vertex identifier: " + quoted(names[i]));
  }
  names.erase(std::unique(names.begin(), names.end()), names.end());
  net.names_ = std::move(names);

  std::unordered_map<std::string, int> index;
  index.reserve(net.names_.size());
  for (size_t i = 0; i < net.names_.size(); ++i) index[net.names_[i]] = static_cast<int>(i);

  auto lookup = [&index](const std::string& s) {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  };

  net.base_ = lookup(data.base);
  if (net.base_ < 0) {
    rep.add("base vertex not in vertex list: " + quoted(data.base));
    net.base_ = 0;  // fallback so traversal-based checks can still run
  }

  // Edges, canonicalized to (min, max) in vertex order.
  std::set<std::pair<int, int>> seen;
  for (const EdgeData& e : data.edges) {
    const int a = lookup(e.u);
    const int b = lookup(e.v);
    if (a < 0) rep.add("unknown vertex in edge: " + quoted(e.u));
    if (b < 0) rep.add("unknown vertex in edge: " + quoted(e.v));
    if (a < 0 || b < 0) continue;
    if (a == b) {
      rep.add("self-loop: " + edge_label(e.u, e.v));
      continue;
    }
    std::pair<int, int> key = std::minmax(a, b);
    if (!seen.insert(key).second) {
      rep.add("duplicate edge: " + edge_label(net.names_[static_cast<size_t>(key.first)],
                                              net.names_[static_cast<size_t>(key.second)]));
      continue;
    }
    if (!std::isfinite(e.c)) {
      rep.add("nonfinite conductance: edge " + edge_label(e.u, e.v));
      continue;
    }
    if (e.c <= 0.0) {
      rep.add("nonpositive conductance: edge " + edge_label(e.u, e.v) +
              " has c = " + fmt_g12(e.c));
      continue;
    }
    net.edges_.push_back(Edge{key.first, key.second, e.c});
  }
  std::sort(net.edges_.begin(), net.edges_.end(),
            [](const Edge& l, const Edge& r) { return std::tie(l.u, l.v) < std::tie(r.u, r.v); });

  const int n = net.vertex_count();
  net.adj_.assign(static_cast<size_t>(n), {});
  net.total_c_.assign(static_cast<size_t>(n), 0.0);
  for (const Edge& e : net.edges_) {
    net.adj_[static_cast<size_t>(e.u)].push_back(Neighbor{e.v, e.c});
    net.adj_[static_cast<size_t>(e.v)].push_back(Neighbor{e.u, e.c});
    net.total_c_[static_cast<size_t>(e.u)] += e.c;
    net.total_c_[static_cast<size_t>(e.v)] += e.c;
  }
  for (auto& nbrs : net.adj_) {
    std::sort(nbrs.begin(), nbrs.end(),
              [](const Neighbor& l, const Neighbor& r) { return l.vertex < r.vertex; });
  }

  if (n == 0) {
    rep.add("no vertices");
    return net;
  }
  for (int x = 0; x < n; ++x) {
    if (net.adj_[static_cast<size_t>(x)].empty())
      rep.add("isolated vertex: " + quoted(net.names_[static_cast<size_t>(x)]));
  }

  // Connectedness by traversal from the base.
  std::vector<char> reached(static_cast<size_t>(n), 0);
  std::deque<int> queue{net.base_};
  reached[static_cast<size_t>(net.base_)] = 1;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : net.adj_[static_cast<size_t>(x)]) {
      if (!reached[static_cast<size_t>(nb.vertex)]) {
        reached[static_cast<size_t>(nb.vertex)] = 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    if (!reached[static_cast<size_t>(x)]) {
      rep.add("not connected: vertex " + quoted(net.names_[static_cast<size_t>(x)]) +
              " not reachable from base " + quoted(net.names_[static_cast<size_t>(net.base_)]));
      break;
    }
  }
  return net;
}

void Network::require_valid() const {
  if (!report_.ok()) throw ValidationError("invalid network: " + report_.lines().front());
}

int Network::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name, shortlex_less);
  if (it != names_.end() && *it == name) return static_cast<int>(it - names_.begin());
  return -1;
}

int Network::require_vertex(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) throw UsageError("unknown vertex: " + quoted(name));
  return i;
}

bool Network::has_edge(int x, int y) const { return conductance(x, y) > 0.0; }

double Network::conductance(int x, int y) const {
  const auto& nbrs = adj_[static_cast<size_t>(x)];
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), y,
                             [](const Neighbor& nb, int v) { return nb.vertex < v; });
  if (it != nbrs.end() && it->vertex == y) return it->c;
  return 0.0;
}

NetworkData Network::to_data() const {
  NetworkData data;
  data.vertices = names_;
  data.base = names_[static_cast<size_t>(base_)];
  data.edges.reserve(edges_.size());
  for (const Edge& e : edges_) {
    data.edges.push_back(EdgeData{names_[static_cast<size_t>(e.u)],
                                  names_[static_cast<size_t>(e.v)], e.c});
  }
  return data;
}

ValidationReport validate(const NetworkData& data) {
  return Network::from_data(data).validation();
}

double WalkData::probability(int x, int y) const {
  for (const Neighbor& nb : transition[static_cast<size_t>(x)]) {
    if (nb.vertex == y) return nb.c;
  }
  return 0.0;
}

WalkData walk_data(const Network& net) {
  net.require_valid();
  const int n = net.vertex_count();
  WalkData walk;
  walk.total_conductance.resize(static_cast<size_t>(n));
  walk.transition.resize(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    const double cx = net.total_conductance(x);
    walk.total_conductance[static_cast<size_t>(x)] = cx;
    auto& row = walk.transition[static_cast<size_t>(x)];
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
      row.push_back(Neighbor{nb.vertex, nb.c / cx});
    }
  }
  return walk;
}

Eigen::MatrixXd transition_dense(const Network& net) {
  net.require_valid();
  const int n = net.vertex_count();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    const double cx = net.total_conductance(x);
    for (const Neighbor& nb : net.adjacency()[static_cast<size_t>(x)]) {
      P(x, nb.vertex) = nb.c / cx;
    }
  }
  return P;
}

Network conductance_from_walk(const WalkInput& input, double rel_tol) {
  if (input.vertex_weight.size() != input.vertices.size())
    throw UsageError("vertex_weight must align with vertices");

  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < input.vertices.size(); ++i)
    index[input.vertices[i]] = static_cast<int>(i);

  auto weight_of = [&](const std::string& s) {
    auto it = index.find(s);
    if (it == index.end()) throw UsageError("unknown vertex in transitions: " + quoted(s));
    return input.vertex_weight[static_cast<size_t>(it->second)];
  };

  // Collect directed entries keyed by name pair; every endpoint must resolve.
  std::map<std::pair<std::string, std::string>, double> p;
  for (const auto& [x, y, pxy] : input.transitions) {
    if (x == y) throw UsageError("self transition: " + quoted(x));
    (void)weight_of(x);
    (void)weight_of(y);
    p[{x, y}] = pxy;
  }

  NetworkData data;
  data.vertices = input.vertices;
  data.base = input.base;
  std::set<std::pair<std::string, std::string>> done;
  for (const auto& [key, pxy] : p) {
    const auto& [x, y] = key;
    std::pair<std::string, std::string> canon =
        shortlex_less(x, y) ? std::make_pair(x, y) : std::make_pair(y, x);
    if (!done.insert(canon).second) continue;
    auto rev = p.find({y, x});
    if (rev == p.end())
      throw ValidationError("not reversible: edge " + edge_label(x, y) +
                            " has no reverse transition");
    const double fwd = weight_of(x) * pxy;
    const double bwd = weight_of(y) * rev->second;
    const double scale = std::max(std::abs(fwd), std::abs(bwd));
    if (std::abs(fwd - bwd) > rel_tol * std::max(scale, 1e-300))
      throw ValidationError("not reversible: edge " + edge_label(x, y) + ": " + fmt_g12(fwd) +
                            " vs " + fmt_g12(bwd));
    // c_xy := c~(x) p_xy, evaluated at the canonical-smaller endpoint.
    const double c = weight_of(canon.first) * p[{canon.first, canon.second}];
    data.edges.push_back(EdgeData{canon.first, canon.second, c});
  }

  Network net = Network::from_data(data);
  net.require_valid();
  return net;
}

std::vector<double> laplacian_apply(const Network& net, const std::vector<double>& u) {
  net.require_valid();
  if (u.size() != static_cast<size_t>(net.vertex_count()))
    throw UsageError("function length does not match vertex count");
  std::vector<double> out(u.size(), 0.0);
  for (const Edge& e : net.edges()) {
    const double flow = e.c * (u[static_cast<size_t>(e.u)] - u[static_cast<size_t>(e.v)]);
    out[static_cast<size_t>(e.u)] += flow;
    out[static_cast<size_t>(e.v)] -= flow;
  }
  return out;
}

Eigen::MatrixXd laplacian_matrix(const Network& net, const std::vector<std::string>& ordering) {
  net.require_valid();
  const int n = net.vertex_count();
  if (static_cast<int>(ordering.size()) != n)
    throw UsageError("ordering is not a permutation of the vertices");
  std::vector<int> pos(static_cast<size_t>(n), -1);
  for (size_t i = 0; i < ordering.size(); ++i) {
    const int v = net.index_of(ordering[i]);
    if (v < 0 || pos[static_cast<size_t>(v)] != -1)
      throw UsageError("ordering is not a permutation of the vertices");
    pos[static_cast<size_t>(v)] = static_cast<int>(i);
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    M(pos[static_cast<size_t>(x)], pos[static_cast<size_t>(x)]) = net.total_conductance(x);
  for (const Edge& e : net.edges()) {
    M(pos[static_cast<size_t>(e.u)], pos[static_cast<size_t>(e.v)]) = -e.c;
    M(pos[static_cast<size_t>(e.v)], pos[static_cast<size_t>(e.u)]) = -e.c;
  }
  return M;
}

Eigen::MatrixXd laplacian_matrix(const Network& net) {
  return laplacian_matrix(net, net.names());
}

Eigen::SparseMatrix<double> laplacian_sparse(const Network& net) {
  net.require_valid();
  const int n = net.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) + 2 * net.edges().size());
  for (int x = 0; x < n; ++x) trips.emplace_back(x, x, net.total_conductance(x));
  for (const Edge& e : net.edges()) {
    trips.emplace_back(e.u, e.v, -e.c);
    trips.emplace_back(e.v, e.u, -e.c);
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

}  // namespace volta
