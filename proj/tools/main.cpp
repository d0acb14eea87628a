// Command-line front end for the energy-space network library.
//
// Exit codes: 0 success; 1 document/validation/verification failure;
// 2 usage error (bad flags, unknown vertices, out-of-range parameters).
// All floating-point output uses 12 significant digits; CSV lines use LF
// endings and no trailing separator, so outputs are byte-deterministic.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "volta/energy.hpp"
#include "volta/errors.hpp"
#include "volta/format.hpp"
#include "volta/frame.hpp"
#include "volta/io.hpp"
#include "volta/models.hpp"
#include "volta/network.hpp"
#include "volta/operators.hpp"

namespace {

using namespace volta;

struct Options {
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0 = use each computation's default

  std::string file;
  std::string x, y;
  bool all_pairs = false;
  bool csv = false;
  std::string orientation = "lex";

  // model subcommand
  std::string family;
  std::string a_list;
  double Q = 2.0, Qbar = 3.0, rung = 1.0;
  long long N = 40;
  double lambda = 0.0;
  double p0 = 0.4, p1 = 0.4, pm = 0.2;
  int depth = 4, depth_min = 5, depth_max = 8;
  double c01 = 1.0, c02 = 1.0, c12 = 1.0;
  std::string emit_path;
};

Network load_valid(const std::string& file) {
  Network net = load_network(file);
  net.require_valid();
  return net;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse conductance list entry: \"" + item + "\"");
    }
  }
  if (values.empty()) throw UsageError("conductance list is empty");
  return values;
}

OrientedEdgeSet parse_orientation(const DipoleSystem& sys, const std::string& spec) {
  if (spec == "lex") return orient_lexicographic(sys.network());
  const std::string prefix = "current:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    const size_t colon = rest.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size())
      throw UsageError("orientation format is lex or current:SRC:SINK");
    const int src = sys.network().require_vertex(rest.substr(0, colon));
    const int sink = sys.network().require_vertex(rest.substr(colon + 1));
    return orient_current_induced(sys, src, sink);
  }
  throw UsageError("orientation format is lex or current:SRC:SINK");
}

int run_validate(const Options& opt) {
  const NetworkData data = load_network_data(opt.file);
  const ValidationReport report = validate(data);
  if (report.ok()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const std::string& line : report.lines()) std::cout << line << "\n";
  return 1;
}

int run_dipole(const Options& opt) {
  const Network net = load_valid(opt.file);
  const int x = net.require_vertex(opt.x);
  const int y = net.require_vertex(opt.y);
  const std::vector<double> v = dipole(net, x, y);
  for (int z = 0; z < net.vertex_count(); ++z)
    std::cout << net.name(z) << "," << fmt_g12(v[static_cast<size_t>(z)]) << "\n";
  return 0;
}

int run_resistance(const Options& opt) {
  const Network net = load_valid(opt.file);
  if (opt.all_pairs) {
    DipoleSystem sys(net);
    for (int i = 0; i < net.vertex_count(); ++i)
      for (int j = i + 1; j < net.vertex_count(); ++j)
        std::cout << net.name(i) << "," << net.name(j) << ","
                  << fmt_g12(sys.resistance(i, j)) << "\n";
    return 0;
  }
  const int x = net.require_vertex(opt.x);
  const int y = net.require_vertex(opt.y);
  std::cout << opt.x << "," << opt.y << "," << fmt_g12(resistance_distance(net, x, y))
            << "\n";
  return 0;
}

int run_gramian(const Options& opt) {
  const Network net = load_valid(opt.file);
  DipoleSystem sys(net);
  const Eigen::MatrixXd& G = sys.gramian();
  const int m = sys.reduced_size();
  for (int r = 0; r < m; ++r)
    std::cout << (r ? "," : "") << net.name(sys.full_index(r));
  std::cout << "\n";
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) std::cout << (s ? "," : "") << fmt_g12(G(r, s));
    std::cout << "\n";
  }
  return 0;
}

int run_frame_check(const Options& opt) {
  const Network net = load_valid(opt.file);
  DipoleSystem sys(net);
  const ParsevalFrame frame(sys, parse_orientation(sys, opt.orientation),
                            opt.tol > 0.0 ? opt.tol : 1e-6);
  const FrameDiagnostics diag = frame_diagnostics(frame);
  if (opt.csv) {
    for (int e = 0; e < frame.size(); ++e) {
      const OrientedEdge& oe = frame.oriented().edges[static_cast<size_t>(e)];
      std::cout << net.name(oe.from) << "," << net.name(oe.to) << ","
                << fmt_g12(diag.norms2[static_cast<size_t>(e)]) << "\n";
    }
    return 0;
  }
  std::cout << "edges," << diag.edge_count << "\n";
  std::cout << "rank," << diag.rank << "\n";
  std::cout << "redundancy," << diag.redundancy << "\n";
  std::cout << "construction_defect," << fmt_g12(frame.construction_defect()) << "\n";
  std::cout << "idempotence_defect," << fmt_g12(diag.idempotence_defect) << "\n";
  std::cout << "min_norm2," << fmt_g12(diag.min_norm2) << "\n";
  std::cout << "max_norm2," << fmt_g12(diag.max_norm2) << "\n";
  std::cout << "is_onb," << fmt_bool(diag.is_onb) << "\n";
  return 0;
}

int run_currents(const Options& opt) {
  const Network net = load_valid(opt.file);
  const int x = net.require_vertex(opt.x);
  const int y = net.require_vertex(opt.y);
  const std::vector<double> u = dipole(net, x, y);
  for (const Edge& e : net.edges()) {
    const double flow = e.c * (u[static_cast<size_t>(e.u)] - u[static_cast<size_t>(e.v)]);
    std::cout << net.name(e.u) << "," << net.name(e.v) << "," << fmt_g12(flow) << "\n";
  }
  return 0;
}

int run_factorize(const Options& opt) {
  const Network net = load_valid(opt.file);
  DipoleSystem sys(net);
  const FriedrichsReport rep =
      friedrichs_matrix(sys, 20, opt.seed, opt.tol > 0.0 ? opt.tol : 1e-8);
  if (opt.csv) {
    for (size_t i = 0; i < rep.spectrum.size(); ++i)
      std::cout << i + 1 << "," << fmt_g12(rep.spectrum[i]) << "\n";
    return 0;
  }
  std::cout << "factorization_defect," << fmt_g12(rep.factorization_defect) << "\n";
  std::cout << "quadratic_form_defect," << fmt_g12(rep.quadratic_form_defect) << "\n";
  std::cout << "adjointness_K," << fmt_g12(adjointness_defect_K(sys, 100, opt.seed))
            << "\n";
  std::cout << "adjointness_L," << fmt_g12(adjointness_defect_L(sys, 100, opt.seed))
            << "\n";
  std::cout << "greens_gauss_defect," << fmt_g12(greens_gauss_check(sys)) << "\n";
  for (size_t i = 0; i < rep.spectrum.size(); ++i)
    std::cout << "lambda_" << i + 1 << "," << fmt_g12(rep.spectrum[i]) << "\n";
  return 0;
}

int run_transition(const Options& opt) {
  const Network net = load_valid(opt.file);
  const TransitionReport rep = transition_operator(net);
  if (opt.csv) {
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i)
      std::cout << i + 1 << "," << fmt_g12(rep.eigenvalues[i]) << "\n";
    return 0;
  }
  std::cout << "row_sum_defect," << fmt_g12(rep.row_sum_defect) << "\n";
  std::cout << "symmetrized_asymmetry," << fmt_g12(rep.symmetrized_asymmetry) << "\n";
  std::cout << "factorization_defect," << fmt_g12(rep.factorization_defect) << "\n";
  std::cout << "spectral_radius," << fmt_g12(rep.spectral_radius) << "\n";
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i)
    std::cout << "lambda_" << i + 1 << "," << fmt_g12(rep.eigenvalues[i]) << "\n";
  return 0;
}

void print_recurrence_csv(const RecurrenceReport& rep, const char* value_header,
                          const char* ratio_header) {
  std::cout << "n," << value_header << "," << ratio_header << ",energy_partial\n";
  for (const RecurrenceRow& row : rep.rows) {
    std::cout << row.n << "," << fmt_g12(row.value) << ","
              << (row.ratio_defined ? fmt_g12(row.ratio) : "") << ","
              << fmt_g12(row.energy_partial) << "\n";
  }
}

int run_model(const Options& opt, const CLI::App* sub) {
  const bool want_emit = sub->count("--emit") > 0;
  const bool want_deficiency = sub->count("--deficiency") > 0;
  const bool want_eigen = sub->count("--eigen") > 0;
  const bool want_harmonic = sub->count("--harmonic") > 0;
  const bool want_domain = sub->count("--domain") > 0;
  const bool want_probe = sub->count("--probe") > 0;
  const bool want_spectrum = sub->count("--spectrum") > 0;

  const int actions = int(want_emit) + int(want_deficiency) + int(want_eigen) +
                      int(want_harmonic) + int(want_domain) + int(want_probe) +
                      int(want_spectrum);
  if (actions != 1)
    throw UsageError("model needs exactly one action (--emit, --deficiency, --eigen, "
                     "--harmonic, --domain, --probe, --spectrum)");

  auto reject_unless = [&](bool allowed, const char* action) {
    if (!allowed)
      throw UsageError(std::string(action) + " is not an action of the " + opt.family +
                       " family");
  };

  NetworkData data;
  if (opt.family == "path") {
    reject_unless(want_emit, "the requested flag");
    data = path_network(parse_list(opt.a_list));
  } else if (opt.family == "geometric") {
    if (want_deficiency) {
      print_recurrence_csv(deficiency_recurrence_geometric(opt.Q, opt.N), "u",
                           "diff_ratio");
      return 0;
    }
    if (want_eigen) {
      print_recurrence_csv(eigenfunction_recurrence(opt.Q, opt.lambda, opt.N), "f",
                           "value_ratio");
      return 0;
    }
    if (want_harmonic) {
      const HarmonicReport rep = harmonic_geometric(opt.Q, static_cast<int>(opt.N));
      std::cout << "truncated_energy," << fmt_g12(rep.truncated_energy) << "\n";
      std::cout << "closed_form_energy," << fmt_g12(rep.closed_form_energy) << "\n";
      std::cout << "limit_energy," << fmt_g12(rep.limit_energy) << "\n";
      std::cout << "p_fixed_residual," << fmt_g12(rep.p_fixed_residual) << "\n";
      return 0;
    }
    if (want_domain) {
      // Membership series for the reciprocal-geometric harmonic function:
      // finite energy, constant domain-series terms, hence divergent.
      const double Q = opt.Q;
      const SeriesProbe probe = friedrichs_domain_series(
          Q, [Q](long long x) { return std::pow(Q, static_cast<double>(-x)); }, opt.N);
      std::cout << "n,partial_sum\n";
      for (const auto& [n, s] : probe.checkpoints)
        std::cout << n << "," << fmt_g12(s) << "\n";
      std::cout << "classification," << to_string(probe.classification) << "\n";
      return 0;
    }
    reject_unless(want_emit, "the requested flag");
    data = geometric_network(opt.Q, static_cast<int>(opt.N));
  } else if (opt.family == "tree") {
    if (want_probe) {
      const TreeProbeReport rep =
          tree_deficiency_probe(opt.p0, opt.p1, opt.pm, opt.depth_min, opt.depth_max);
      std::cout << "depth,energy,ratio\n";
      for (size_t i = 0; i < rep.depths.size(); ++i) {
        std::cout << rep.depths[i] << "," << fmt_g12(rep.energies[i]) << ","
                  << (i ? fmt_g12(rep.ratios[i - 1]) : "") << "\n";
      }
      std::cout << "trend," << rep.trend << "\n";
      return 0;
    }
    reject_unless(want_emit, "the requested flag");
    data = binary_tree_network(opt.p0, opt.p1, opt.pm, opt.depth);
  } else if (opt.family == "strip") {
    reject_unless(want_emit, "the requested flag");
    data = lattice_strip_network(opt.Q, opt.Qbar, static_cast<int>(opt.N), opt.rung);
  } else if (opt.family == "triangle") {
    if (want_spectrum) {
      const TriangleSpectrumReport rep = triangle_spectrum(opt.c01, opt.c02, opt.c12);
      std::cout << "lambda_1," << fmt_g12(rep.lambda1) << "\n";
      std::cout << "lambda_2," << fmt_g12(rep.lambda2) << "\n";
      std::cout << "lambda_3," << fmt_g12(rep.lambda3) << "\n";
      std::cout << "gap," << fmt_g12(rep.gap) << "\n";
      std::cout << "crosscheck_defect," << fmt_g12(rep.crosscheck_defect) << "\n";
      return 0;
    }
    reject_unless(want_emit, "the requested flag");
    data = triangle_network(opt.c01, opt.c02, opt.c12);
  } else {
    throw UsageError("unknown model family: \"" + opt.family + "\"");
  }

  save_network_data(opt.emit_path, data);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-space analysis of weighted graph networks"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Options opt;
  app.add_option("--seed", opt.seed, "Seed for randomized verification probes")
      ->capture_default_str();
  app.add_option("--tol", opt.tol, "Override the verification tolerance (0 = default)")
      ->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Check a network document");
  validate_cmd->add_option("file", opt.file, "Network JSON document")->required();

  auto* dipole_cmd =
      app.add_subcommand("dipole", "Grounded dipole potential between two vertices");
  dipole_cmd->add_option("file", opt.file)->required();
  dipole_cmd->add_option("x", opt.x, "Source vertex")->required();
  dipole_cmd->add_option("y", opt.y, "Sink vertex")->required();

  auto* resistance_cmd =
      app.add_subcommand("resistance", "Effective resistance between vertices");
  resistance_cmd->add_option("file", opt.file)->required();
  resistance_cmd->add_option("x", opt.x, "First vertex");
  resistance_cmd->add_option("y", opt.y, "Second vertex");
  resistance_cmd->add_flag("--all-pairs", opt.all_pairs, "Every vertex pair");

  auto* gramian_cmd =
      app.add_subcommand("gramian", "Dipole gramian over the non-base vertices");
  gramian_cmd->add_option("file", opt.file)->required();

  auto* frame_cmd =
      app.add_subcommand("frame-check", "Normalized-dipole frame diagnostics");
  frame_cmd->add_option("file", opt.file)->required();
  frame_cmd->add_option("--orientation", opt.orientation,
                        "lex or current:SRC:SINK")
      ->capture_default_str();
  frame_cmd->add_flag("--csv", opt.csv, "Per-edge norms as CSV");

  auto* currents_cmd =
      app.add_subcommand("currents", "Edge currents of a dipole potential");
  currents_cmd->add_option("file", opt.file)->required();
  currents_cmd->add_option("x", opt.x, "Source vertex")->required();
  currents_cmd->add_option("y", opt.y, "Sink vertex")->required();

  auto* factorize_cmd = app.add_subcommand(
      "factorize", "Laplacian factorization defects and form spectrum");
  factorize_cmd->add_option("file", opt.file)->required();
  factorize_cmd->add_flag("--csv", opt.csv, "Spectrum as index,eigenvalue CSV");

  auto* transition_cmd =
      app.add_subcommand("transition", "Transition operator diagnostics and spectrum");
  transition_cmd->add_option("file", opt.file)->required();
  transition_cmd->add_flag("--csv", opt.csv, "Spectrum as index,eigenvalue CSV");

  auto* model_cmd = app.add_subcommand("model", "Example families and their reports");
  model_cmd->add_option("family", opt.family, "path|geometric|tree|strip|triangle")
      ->required();
  model_cmd->add_option("--a", opt.a_list, "Comma-separated path conductances");
  model_cmd->add_option("--Q", opt.Q, "Geometric ratio")->capture_default_str();
  model_cmd->add_option("--Qbar", opt.Qbar, "Second-rail ratio")->capture_default_str();
  model_cmd->add_option("--rung", opt.rung, "Rung conductance")->capture_default_str();
  model_cmd->add_option("--N", opt.N, "Truncation length")->capture_default_str();
  model_cmd->add_option("--p0", opt.p0, "Tree branch weight 0")->capture_default_str();
  model_cmd->add_option("--p1", opt.p1, "Tree branch weight 1")->capture_default_str();
  model_cmd->add_option("--pm", opt.pm, "Tree backtrack weight")->capture_default_str();
  model_cmd->add_option("--depth", opt.depth, "Tree depth for --emit")
      ->capture_default_str();
  model_cmd->add_option("--depth-min", opt.depth_min, "First probed depth")
      ->capture_default_str();
  model_cmd->add_option("--depth-max", opt.depth_max, "Last probed depth")
      ->capture_default_str();
  model_cmd->add_option("--c01", opt.c01, "Triangle conductance 0-1")
      ->capture_default_str();
  model_cmd->add_option("--c02", opt.c02, "Triangle conductance 0-2")
      ->capture_default_str();
  model_cmd->add_option("--c12", opt.c12, "Triangle conductance 1-2")
      ->capture_default_str();
  model_cmd->add_option("--emit", opt.emit_path, "Write the network document here");
  model_cmd->add_flag("--deficiency", "Defect recurrence CSV (geometric)");
  model_cmd->add_option("--eigen", opt.lambda,
                        "Eigenfunction recurrence CSV at this eigenvalue (geometric)");
  model_cmd->add_flag("--harmonic", "Reciprocal-geometric harmonic report (geometric)");
  model_cmd->add_flag("--domain", "Operator-domain membership series (geometric)");
  model_cmd->add_flag("--probe", "Depth-sweep defect experiment (tree)");
  model_cmd->add_flag("--spectrum", "Closed-form spectrum (triangle)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(opt);
    if (dipole_cmd->parsed()) return run_dipole(opt);
    if (resistance_cmd->parsed()) {
      if (!opt.all_pairs && (opt.x.empty() || opt.y.empty()))
        throw UsageError("resistance needs two vertices or --all-pairs");
      return run_resistance(opt);
    }
    if (gramian_cmd->parsed()) return run_gramian(opt);
    if (frame_cmd->parsed()) return run_frame_check(opt);
    if (currents_cmd->parsed()) return run_currents(opt);
    if (factorize_cmd->parsed()) return run_factorize(opt);
    if (transition_cmd->parsed()) return run_transition(opt);
    if (model_cmd->parsed()) return run_model(opt, model_cmd);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
