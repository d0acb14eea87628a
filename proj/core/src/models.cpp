#include "volta/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "volta/energy.hpp"
#include "volta/errors.hpp"

namespace volta {

namespace {

constexpr double kOverflowCap = 1e100;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw UsageError(std::string(what) + " must be positive and finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

NetworkData path_network(const std::vector<double>& a) {
  if (a.empty()) throw UsageError("path needs at least one edge conductance");
  NetworkData data;
  data.base = "0";
  data.vertices.reserve(a.size() + 1);
  for (size_t n = 0; n <= a.size(); ++n) data.vertices.push_back(std::to_string(n));
  for (size_t n = 1; n <= a.size(); ++n) {
    require_positive(a[n - 1], "path conductance");
    data.edges.push_back({std::to_string(n - 1), std::to_string(n), a[n - 1]});
  }
  return data;
}

NetworkData geometric_network(double Q, int N) {
  require_positive(Q, "ratio Q");
  if (N < 1) throw UsageError("geometric path needs N >= 1");
  std::vector<double> a(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) a[static_cast<size_t>(n - 1)] = std::pow(Q, n);
  return path_network(a);
}

NetworkData binary_tree_network(double p0, double p1, double pm, int depth) {
  for (double p : {p0, p1, pm})
    if (!(p > 0.0 && p < 1.0))
      throw UsageError("tree probabilities must lie in (0, 1)");
  if (std::abs(p0 + p1 + pm - 1.0) > 1e-12)
    throw UsageError("tree probabilities must sum to 1");
  if (depth < 2 || depth > 14) throw UsageError("tree depth must be in [2, 14]");

  NetworkData data;
  data.base = "o";
  // Level order: generate words by length; names prefix with "o" so the
  // canonical shortlex order of names equals this generation order.
  std::vector<std::string> level = {""};
  data.vertices.push_back("o");
  for (int d = 1; d <= depth; ++d) {
    std::vector<std::string> next;
    next.reserve(level.size() * 2);
    for (const std::string& w : level) {
      for (char bit : {'0', '1'}) {
        std::string child = w + bit;
        data.vertices.push_back("o" + child);
        const double wx = tree_vertex_weight(p0, p1, pm, "o" + w);
        const double p = bit == '0' ? p0 : p1;
        data.edges.push_back({"o" + w, "o" + child, wx * p});
        next.push_back(std::move(child));
      }
    }
    level = std::move(next);
  }
  return data;
}

double tree_vertex_weight(double p0, double p1, double pm, const std::string& name) {
  if (name.empty() || name[0] != 'o')
    throw UsageError("tree vertex names start with \"o\"");
  int f0 = 0, f1 = 0;
  for (size_t i = 1; i < name.size(); ++i) {
    if (name[i] == '0')
      ++f0;
    else if (name[i] == '1')
      ++f1;
    else
      throw UsageError("tree vertex name carries a non-binary letter");
  }
  return std::pow(p0, f0) * std::pow(p1, f1) / std::pow(pm, f0 + f1);
}

double tree_reversibility_defect(const Network& net, double p0, double p1, double pm) {
  net.require_valid();
  double worst = 0.0;
  for (const Edge& e : net.edges()) {
    const std::string& nu = net.name(e.u);
    const std::string& nv = net.name(e.v);
    const bool u_parent = nu.size() < nv.size();
    const std::string& parent = u_parent ? nu : nv;
    const std::string& child = u_parent ? nv : nu;
    const double p_down = child.back() == '0' ? p0 : p1;
    const double fwd = tree_vertex_weight(p0, p1, pm, parent) * p_down;
    const double bwd = tree_vertex_weight(p0, p1, pm, child) * pm;
    const double scale = std::max({std::abs(fwd), std::abs(bwd), 1e-300});
    worst = std::max({worst, std::abs(fwd - e.c) / scale, std::abs(bwd - e.c) / scale});
  }
  return worst;
}

NetworkData lattice_strip_network(double Q, double Qbar, int N, double rung) {
  require_positive(Q, "ratio Q");
  require_positive(Qbar, "ratio Qbar");
  require_positive(rung, "rung conductance");
  if (N < 1) throw UsageError("strip needs N >= 1");

  NetworkData data;
  data.base = "a0";
  for (int n = 0; n <= N; ++n) data.vertices.push_back("a" + std::to_string(n));
  for (int n = 0; n <= N; ++n) data.vertices.push_back("b" + std::to_string(n));
  for (int n = 1; n <= N; ++n) {
    data.edges.push_back(
        {"a" + std::to_string(n - 1), "a" + std::to_string(n), std::pow(Q, n)});
    data.edges.push_back(
        {"b" + std::to_string(n - 1), "b" + std::to_string(n), std::pow(Qbar, n)});
  }
  for (int n = 0; n <= N; ++n)
    data.edges.push_back({"a" + std::to_string(n), "b" + std::to_string(n), rung});
  return data;
}

NetworkData triangle_network(double c01, double c02, double c12) {
  require_positive(c01, "c01");
  require_positive(c02, "c02");
  require_positive(c12, "c12");
  NetworkData data;
  data.vertices = {"0", "1", "2"};
  data.base = "2";
  data.edges = {{"0", "1", c01}, {"0", "2", c02}, {"1", "2", c12}};
  return data;
}

// ---------------------------------------------------------------------------
// Path closed forms
// ---------------------------------------------------------------------------

std::vector<double> path_dipole_closed_form(const std::vector<double>& a, int x, int y) {
  const int N = static_cast<int>(a.size());
  if (!(0 <= x && x < y && y <= N))
    throw UsageError("closed-form dipole needs 0 <= x < y <= N");
  std::vector<double> v(static_cast<size_t>(N) + 1, 0.0);
  double acc = 0.0;
  for (int z = x + 1; z <= N; ++z) {
    if (z <= y) acc -= 1.0 / a[static_cast<size_t>(z - 1)];
    v[static_cast<size_t>(z)] = acc;
  }
  return v;
}

double path_distance_closed_form(const std::vector<double>& a, int x, int y) {
  const int N = static_cast<int>(a.size());
  if (x > y) std::swap(x, y);
  if (!(0 <= x && y <= N)) throw UsageError("vertices out of range");
  double d = 0.0;
  for (int k = x + 1; k <= y; ++k) d += 1.0 / a[static_cast<size_t>(k - 1)];
  return d;
}

// ---------------------------------------------------------------------------
// Series probes
// ---------------------------------------------------------------------------

namespace {

SeriesProbe march_series(const std::function<double(long long)>& term, long long n_max) {
  if (n_max < 10) throw UsageError("series probe needs n_max >= 10");
  SeriesProbe probe;
  double sum = 0.0;
  long long next = 10;
  for (long long n = 1; n <= n_max; ++n) {
    sum += term(n);
    if (n == next) {
      probe.checkpoints.emplace_back(n, sum);
      next *= 2;
    }
    if (!std::isfinite(sum)) {
      probe.checkpoints.emplace_back(n, sum);
      break;
    }
  }
  std::vector<double> sums;
  sums.reserve(probe.checkpoints.size());
  for (const auto& [n, s] : probe.checkpoints) sums.push_back(s);
  probe.classification = classify_partial_sums(sums);
  return probe;
}

}  // namespace

SeriesProbe bounded_metric_probe(const std::function<double(long long)>& a,
                                 long long n_max) {
  return march_series([&a](long long n) { return 1.0 / a(n); }, n_max);
}

SeriesProbe friedrichs_domain_series(double Q, const std::function<double(long long)>& f,
                                     long long n_max) {
  require_positive(Q, "ratio Q");
  return march_series(
      [&f, Q](long long n) {
        // Term at x = n - 1: |f(x) - f(x+1)|^2 Q^{2x}, evaluated as the
        // square of d * Q^x so an exactly-zero difference stays zero even
        // where Q^{2x} overflows.
        const long long x = n - 1;
        const double d = f(x) - f(x + 1);
        if (d == 0.0) return 0.0;
        const double scaled = d * std::pow(Q, static_cast<double>(x));
        return scaled * scaled;
      },
      n_max);
}

// ---------------------------------------------------------------------------
// Half-line recurrences in flux form
// ---------------------------------------------------------------------------

namespace {

struct FluxSeed {
  double value0 = 1.0;
  double flux1 = 1.0;  // J_1 = a_1 (u_1 - u_0)
};

// Shared march: values u_n, fluxes J_n with u_n = u_{n-1} + J_n / a_n and
// J_{n+1} = flux_update(J_n, u_n). Rows recorded up to N; energy partial sums
// E_n = sum_{k<=n} J_k^2 / a_k recorded at {N, 2N, 4N, 8N, 16N}.
template <class FluxUpdate, class RatioOf>
RecurrenceReport march_flux(const std::function<double(long long)>& a, long long N,
                            FluxSeed seed, FluxUpdate flux_update, RatioOf ratio_of) {
  if (N < 2) throw UsageError("recurrence march needs N >= 2");
  RecurrenceReport rep;
  rep.rows.reserve(static_cast<size_t>(N) + 1);

  const long long total = 16 * N;
  double u_prev2 = 0.0, u_prev = seed.value0;
  double J = seed.flux1;
  double energy = 0.0;

  rep.rows.push_back({0, seed.value0, 0.0, false, 0.0});

  long long next_checkpoint = N;
  for (long long n = 1; n <= total; ++n) {
    const double an = a(n);
    const double u = u_prev + J / an;
    energy += J * J / an;

    if (n <= N) {
      RecurrenceRow row;
      row.n = n;
      row.value = u;
      row.energy_partial = energy;
      row.ratio_defined = ratio_of(n, u, u_prev, u_prev2, row.ratio);
      rep.rows.push_back(row);
    }

    if (!std::isfinite(u) || std::abs(u) > kOverflowCap || !std::isfinite(energy)) {
      rep.overflowed = true;
      rep.overflow_at = n;
      rep.energy_checkpoints.emplace_back(n, energy);
      break;
    }

    if (n == next_checkpoint) {
      rep.energy_checkpoints.emplace_back(n, energy);
      next_checkpoint *= 2;
    }

    J = flux_update(J, u);
    u_prev2 = u_prev;
    u_prev = u;
  }

  if (rep.overflowed) {
    rep.energy_classification = Classification::Divergent;
  } else {
    std::vector<double> sums;
    for (const auto& [n, s] : rep.energy_checkpoints) sums.push_back(s);
    rep.energy_classification = classify_partial_sums(sums);
  }

  // Transfer matrix [[t, -s], [1, 0]] of the value recurrence at step N.
  const double aN = a(N), aN1 = a(N + 1);
  const double t = (aN + aN1 + 1.0) / aN1;
  const double s = aN / aN1;
  const double disc = t * t - 4.0 * s;
  if (disc >= 0.0) {
    rep.transfer_lo = (t - std::sqrt(disc)) / 2.0;
    rep.transfer_hi = (t + std::sqrt(disc)) / 2.0;
  } else {
    rep.transfer_lo = rep.transfer_hi = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

// Difference ratio (u_n - u_{n-1}) / (u_{n-1} - u_{n-2}) from stored values;
// undefined until n = 2 or when the previous difference vanishes.
bool difference_ratio(long long n, double u, double u_prev, double u_prev2,
                      double& out) {
  if (n < 2) return false;
  const double d1 = u - u_prev;
  const double d0 = u_prev - u_prev2;
  if (d0 == 0.0 || !std::isfinite(d0) || !std::isfinite(d1)) return false;
  out = d1 / d0;
  return std::isfinite(out);
}

// Value ratio f_n / f_{n-1}; undefined when f_{n-1} = 0.
bool value_ratio(long long n, double u, double u_prev, double /*u_prev2*/, double& out) {
  if (n < 1) return false;
  if (u_prev == 0.0 || !std::isfinite(u_prev) || !std::isfinite(u)) return false;
  out = u / u_prev;
  return std::isfinite(out);
}

}  // namespace

RecurrenceReport deficiency_recurrence(const std::function<double(long long)>& a,
                                       long long N) {
  if (N < 20) throw UsageError("defect recurrence needs N >= 20");
  // Defect equation (L u)(n) = -u(n) on the half line, seeded at vertex 0:
  // a_1 (u_0 - u_1) + u_0 = 0, so J_1 = a_1 (u_1 - u_0) = u_0 = 1, and at
  // interior n the flux gains the vertex value: J_{n+1} = J_n + u_n.
  return march_flux(
      a, N, FluxSeed{1.0, 1.0}, [](double J, double u) { return J + u; },
      difference_ratio);
}

RecurrenceReport deficiency_recurrence_geometric(double Q, long long N) {
  require_positive(Q, "ratio Q");
  return deficiency_recurrence(
      [Q](long long n) { return std::pow(Q, static_cast<double>(n)); }, N);
}

RecurrenceReport eigenfunction_recurrence(double Q, double lambda, long long N) {
  require_positive(Q, "ratio Q");
  if (lambda < 0.0 || !std::isfinite(lambda))
    throw UsageError("eigenvalue parameter must be >= 0");
  if (N < 20) throw UsageError("eigenfunction recurrence needs N >= 20");
  const auto a = [Q](long long n) { return std::pow(Q, static_cast<double>(n)); };
  // Value form f(n+1) = ((1+Q)/Q - lambda/Q^n) f(n) - (1/Q) f(n-1); in flux
  // variables the lambda term drains the flux: J_{n+1} = J_n - Q lambda f_n.
  // lambda = 0 makes the generic vertex-0 seed produce constants (the zero of
  // the energy space), so it is seeded with the harmonic pair instead:
  // f_0 = 1, f_1 = 1/Q, i.e. J_1 = a_1 (f_1 - f_0) = 1 - Q.
  FluxSeed seed;
  if (lambda == 0.0) {
    seed = FluxSeed{1.0, 1.0 - Q};
  } else {
    seed = FluxSeed{1.0, -lambda};
  }
  RecurrenceReport rep = march_flux(
      a, N, seed, [Q, lambda](double J, double f) { return J - Q * lambda * f; },
      value_ratio);

  // The defect-march transfer matrix does not apply here; overwrite with the
  // eigen-equation coefficients t = (1+Q)/Q - lambda/Q^N, s = 1/Q.
  const double t = (1.0 + Q) / Q - lambda / std::pow(Q, static_cast<double>(N));
  const double s = 1.0 / Q;
  const double disc = t * t - 4.0 * s;
  if (disc >= 0.0) {
    rep.transfer_lo = (t - std::sqrt(disc)) / 2.0;
    rep.transfer_hi = (t + std::sqrt(disc)) / 2.0;
  } else {
    rep.transfer_lo = rep.transfer_hi = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Harmonic function on the geometric path
// ---------------------------------------------------------------------------

HarmonicReport harmonic_geometric(double Q, int N) {
  if (!(Q > 1.0) || !std::isfinite(Q))
    throw UsageError("harmonic family needs Q > 1");
  if (N < 2) throw UsageError("harmonic truncation needs N >= 2");

  HarmonicReport rep;
  rep.values.resize(static_cast<size_t>(N) + 1);
  for (int n = 0; n <= N; ++n)
    rep.values[static_cast<size_t>(n)] = std::pow(Q, static_cast<double>(-n));

  for (int n = 1; n <= N; ++n) {
    const double an = std::pow(Q, static_cast<double>(n));
    const double d = rep.values[static_cast<size_t>(n)] - rep.values[static_cast<size_t>(n - 1)];
    rep.truncated_energy += an * d * d;
  }
  rep.closed_form_energy = (Q - 1.0) * (1.0 - std::pow(Q, static_cast<double>(-N)));
  rep.limit_energy = Q - 1.0;

  // Interior fixed-point residual of the averaging operator: at vertex n the
  // incident conductances are Q^n (toward 0) and Q^{n+1} (away), so the
  // weights are p_- = 1/(1+Q) and p_+ = Q/(1+Q), independent of n.
  const double p_down = 1.0 / (1.0 + Q);
  const double p_up = Q / (1.0 + Q);
  for (int n = 1; n < N; ++n) {
    const double pu = p_down * rep.values[static_cast<size_t>(n - 1)] +
                      p_up * rep.values[static_cast<size_t>(n + 1)];
    rep.p_fixed_residual =
        std::max(rep.p_fixed_residual, std::abs(pu - rep.values[static_cast<size_t>(n)]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tree defect experiment
// ---------------------------------------------------------------------------

TreeProbeReport tree_deficiency_probe(double p0, double p1, double pm, int depth_min,
                                      int depth_max) {
  if (depth_min < 4 || depth_max < depth_min || depth_max > 10)
    throw UsageError("tree probe depths must satisfy 4 <= depth_min <= depth_max <= 10");

  TreeProbeReport rep;
  for (int depth = depth_min; depth <= depth_max; ++depth) {
    const Network net = Network::from_data(binary_tree_network(p0, p1, pm, depth));
    net.require_valid();

    // Interior: all words shorter than the truncation depth (name length
    // counts the "o" prefix); the leaves are the free boundary.
    std::vector<char> interior(static_cast<size_t>(net.vertex_count()), 0);
    for (int x = 0; x < net.vertex_count(); ++x)
      if (static_cast<int>(net.name(x).size()) - 1 <= depth - 1)
        interior[static_cast<size_t>(x)] = 1;

    AnchorConstraint anchor;
    anchor.terms = {{net.require_vertex("o0"), 1.0}, {net.require_vertex("o1"), -1.0}};
    anchor.rhs = 1.0;

    const DeficiencyProbeReport probe = deficiency_probe(net, interior, anchor);
    rep.depths.push_back(depth);
    rep.energies.push_back(probe.energy);
    rep.max_relative_residual =
        std::max({rep.max_relative_residual, probe.interior_residual, probe.eq_residual});
    if (depth == depth_max) {
      rep.reversibility_defect = tree_reversibility_defect(net, p0, p1, pm);
      rep.deepest_defect = probe.u;
    }
  }

  for (size_t i = 1; i < rep.energies.size(); ++i)
    rep.ratios.push_back(rep.energies[i] / rep.energies[i - 1]);

  bool decreasing = rep.ratios.size() >= 2, increasing = rep.ratios.size() >= 2;
  for (size_t i = 1; i < rep.ratios.size(); ++i) {
    if (!(rep.ratios[i] < rep.ratios[i - 1])) decreasing = false;
    if (!(rep.ratios[i] > rep.ratios[i - 1])) increasing = false;
  }
  rep.trend = decreasing ? "finite" : increasing ? "infinite" : "inconclusive";
  return rep;
}

// ---------------------------------------------------------------------------
// Triangle spectrum
// ---------------------------------------------------------------------------

TriangleSpectrumReport triangle_spectrum(double c01, double c02, double c12) {
  require_positive(c01, "c01");
  require_positive(c02, "c02");
  require_positive(c12, "c12");

  TriangleSpectrumReport rep;
  const double sum = c01 + c02 + c12;
  const double norm2 = c01 * c01 + c02 * c02 + c12 * c12;
  const double dot = c01 * c02 + c01 * c12 + c02 * c12;
  const double disc = std::max(norm2 - dot, 0.0);
  const double root = std::sqrt(disc);
  rep.lambda1 = 0.0;
  rep.lambda2 = sum - root;
  rep.lambda3 = sum + root;
  rep.gap = 2.0 * root;

  const Network net = Network::from_data(triangle_network(c01, c02, c12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian_matrix(net));
  if (es.info() != Eigen::Success)
    throw VerificationError("triangle eigensolve failed");
  rep.crosscheck_defect = std::max({std::abs(es.eigenvalues()(0) - rep.lambda1),
                                    std::abs(es.eigenvalues()(1) - rep.lambda2),
                                    std::abs(es.eigenvalues()(2) - rep.lambda3)});
  return rep;
}

}  // namespace volta
