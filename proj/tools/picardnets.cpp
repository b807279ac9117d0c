// Command-line front end: compile and verify MLP networks, run the estimator,
// PDE error sweeps, sampler checks and interpolation-net audits.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "picardnets/interp/interp.hpp"
#include "picardnets/lab/experiments.hpp"
#include "picardnets/lab/problems.hpp"
#include "picardnets/lab/stats.hpp"
#include "picardnets/mlp/compiler.hpp"
#include "picardnets/mlp/engine.hpp"
#include "picardnets/nn/calculus.hpp"
#include "picardnets/nn/identity.hpp"
#include "picardnets/nn/serialize.hpp"

using namespace picardnets;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A check ran and failed; `report` is printed as the diagnostic.
struct CheckFailed : std::runtime_error {
  json report;
  explicit CheckFailed(json r) : std::runtime_error("check failed"), report(std::move(r)) {}
};

std::uint64_t default_seed() {
  const char* env = std::getenv("PICARDNETS_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError("PICARDNETS_SEED must be a non-negative integer");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << text;
}

Activation parse_activation(const std::string& tag) {
  try {
    return Activation::parse(tag);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// "--g file PATH" and "--g file:PATH" are both accepted.
std::pair<std::string, std::string> split_source(const std::vector<std::string>& values, const std::string& flag) {
  if (values.empty()) throw UsageError(flag + " needs a value");
  if (values.size() == 2) return {values[0], values[1]};
  const auto colon = values[0].find(':');
  if (colon == std::string::npos) return {values[0], ""};
  return {values[0].substr(0, colon), values[0].substr(colon + 1)};
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError(what + ": '" + s + "' is not a number");
}

struct NetFlags {
  std::size_t d = 1;
  unsigned n = 1;
  unsigned M = 1;
  double t = 0.0;
  double horizon = 1.0;
  std::string activation = "relu";
  std::vector<std::string> g{"quadratic"};
  std::vector<std::string> f{"zero"};
  std::uint64_t seed = 0;
  double g_range = 2.0;
  std::size_t g_segments = 8;
  double g_sharpness = 64.0;
  bool allow_large = false;
};

void add_problem_flags(CLI::App* app, NetFlags& fl) {
  app->add_option("--d", fl.d, "Dimension")->check(CLI::PositiveNumber);
  app->add_option("--n", fl.n, "Level");
  app->add_option("--m", fl.M, "Base M")->check(CLI::PositiveNumber);
  app->add_option("--t", fl.t, "Evaluation time");
  app->add_option("--horizon", fl.horizon, "Horizon T");
  app->add_option("--activation", fl.activation, "relu | leaky:ALPHA | softplus | repu:GAMMA");
  app->add_option("--g", fl.g, "quadratic | file PATH")->expected(1, 2);
  app->add_option("--f", fl.f, "zero | linear:LAMBDA | interp PATH")->expected(1, 2);
  app->add_option("--seed", fl.seed, "Root seed (default $PICARDNETS_SEED or 0)");
  app->add_option("--g-range", fl.g_range, "Half-width of the grid for the quadratic datum net");
  app->add_option("--g-segments", fl.g_segments, "Grid segments for the quadratic datum net")->check(CLI::PositiveNumber);
  app->add_option("--g-sharpness", fl.g_sharpness, "Softplus sharpness for the quadratic datum net");
}

Network load_scalar_net(const std::string& path, std::size_t in, const char* what) {
  NetworkFile file = load_network(path);
  if (file.net.input_dim() != in || file.net.output_dim() != 1)
    throw UsageError(std::string(what) + " network in " + path + " has dims " + to_string(file.net.dims()));
  return std::move(file.net);
}

// Σ_i q(x_i) with q a one-dimensional net for x² (exact under RePU(2), an
// interpolant on [-range, range] otherwise).
Network quadratic_datum(const NetFlags& fl, const Activation& act) {
  Network q = monomial_net(2);
  if (act.kind() == ActivationKind::RePU) {
    if (act.gamma() != 2) throw UsageError("--g quadratic under RePU needs repu:2");
  } else {
    const interp::Grid grid = interp::Grid::uniform(-fl.g_range, fl.g_range, fl.g_segments);
    std::vector<double> values;
    for (double x : grid.points()) values.push_back(x * x);
    q = interp::interp_net(grid, values, act, fl.g_sharpness);
  }
  std::vector<Network> copies(fl.d, q);
  return compose(fan_in(1, fl.d), parallelize(copies));
}

Network datum_net(const NetFlags& fl, const Activation& act) {
  const auto [kind, arg] = split_source(fl.g, "--g");
  if (kind == "quadratic" && arg.empty()) return quadratic_datum(fl, act);
  if (kind == "file" && !arg.empty()) return load_scalar_net(arg, fl.d, "datum");
  throw UsageError("--g expects quadratic or file PATH");
}

Network nonlinearity_net(const NetFlags& fl, const Network& j) {
  const auto [kind, arg] = split_source(fl.f, "--f");
  if (kind == "zero" && arg.empty()) return scalar_mul(0.0, j);
  if (kind == "linear" && !arg.empty()) return scalar_mul(parse_real(arg, "--f linear"), j);
  if (kind == "interp" && !arg.empty()) return load_scalar_net(arg, 1, "nonlinearity");
  throw UsageError("--f expects zero, linear:LAMBDA or interp PATH");
}

mlp::CompileInputs build_inputs(const NetFlags& fl) {
  const Activation act = parse_activation(fl.activation);
  Network j = default_identity(act);
  Network f = nonlinearity_net(fl, j);
  mlp::CompileInputs in{mlp::MlpConfig{fl.n, fl.M, fl.horizon, fl.t, fl.d}, datum_net(fl, act), std::move(f),
                        std::move(j), act, mlp::RandomOracle(fl.seed, fl.d), fl.allow_large};
  try {
    in.cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return in;
}

int run_compile(const NetFlags& fl, const std::string& out, const std::string& report_path, bool prune) {
  const auto in = build_inputs(fl);
  Network net = mlp::compile_mlp(in, mlp::ThetaPath::root(), fl.t);
  const mlp::SizeReport report = mlp::size_report(in, net);
  if (prune) net = mlp::prune_zero_blocks(net, in.activation);
  save_network(out, net, in.activation);
  if (!report_path.empty()) write_text(report_path, report.to_json() + "\n");
  if (!report.within_bounds()) throw CheckFailed(json::parse(report.to_json()));
  std::cout << report.to_json(-1) << "\n";
  return 0;
}

int run_verify(const NetFlags& fl, std::size_t probes, double tol) {
  const auto in = build_inputs(fl);
  const auto pts = lab::box_points(fl.seed, probes, fl.d, -1.0, 1.0);
  const Network net = mlp::compile_mlp(in, mlp::ThetaPath::root(), fl.t);
  json out;
  out["probes"] = probes;
  out["tol"] = tol;
  try {
    const auto rep = mlp::verify_equivalence(in, net, mlp::ThetaPath::root(), fl.t, pts, tol);
    out["max_residual"] = rep.max_residual;
    out["worst_probe"] = rep.worst_probe;
    out["pass"] = true;
  } catch (const mlp::EquivalenceError& e) {
    out["pass"] = false;
    out["error"] = e.what();
    throw CheckFailed(out);
  }
  std::cout << out.dump() << "\n";
  return 0;
}

std::vector<Vector> read_points(const std::string& path, std::size_t d) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open points file " + path);
  std::vector<Vector> pts;
  std::string line;
  while (std::getline(is, line)) {
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ls(line);
    Vector x;
    for (double v; ls >> v;) x.push_back(v);
    if (!ls.eof()) throw UsageError("points file: cannot parse '" + line + "'");
    if (x.empty()) continue;
    if (x.size() != d) throw UsageError("points file: point of length " + std::to_string(x.size()) + ", expected " + std::to_string(d));
    pts.push_back(std::move(x));
  }
  return pts;
}

int run_mlp(const NetFlags& fl, const std::string& points_path, std::vector<std::uint64_t> seeds, unsigned workers,
            const std::string& out) {
  const Activation act = parse_activation(fl.activation);
  mlp::ProblemFns fns;
  const auto [gk, ga] = split_source(fl.g, "--g");
  if (gk == "quadratic" && ga.empty()) {
    fns.g = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
  } else {
    const Network g = datum_net(fl, act);
    fns.g = [g, act](std::span<const double> x) { return realize(g, act, x)[0]; };
  }
  const auto [fk, fa] = split_source(fl.f, "--f");
  if (fk == "zero" && fa.empty()) {
    fns.f = [](double) { return 0.0; };
  } else if (fk == "linear" && !fa.empty()) {
    const double lambda = parse_real(fa, "--f linear");
    fns.f = [lambda](double u) { return lambda * u; };
  } else {
    const Network f = nonlinearity_net(fl, default_identity(act));
    fns.f = [f, act](double u) { return realize_scalar(f, act, u); };
  }
  const mlp::MlpConfig cfg{fl.n, fl.M, fl.horizon, fl.t, fl.d};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (seeds.empty()) seeds.push_back(fl.seed);
  const auto pts = read_points(points_path, fl.d);
  const auto values = mlp::mlp_estimate_batch(cfg, pts, seeds, fns, workers);
  std::string csv = "point,seed,value\n";
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t s = 0; s < seeds.size(); ++s)
      csv += std::to_string(p) + ',' + std::to_string(seeds[s]) + ',' + lab::format_double(values[s][p]) + '\n';
  write_text(out, csv);
  return 0;
}

struct PdeFlags {
  std::string problem = "heat-quadratic";
  std::size_t d = 5;
  double c = 0.5;
  double horizon = 1.0;
  double lambda = 0.0;
  std::string direction = "terminal";
  double p = 2.0;
  std::string levels = "1:1,2:2,3:3";
  std::vector<std::uint64_t> seeds;
  std::size_t samples = 256;
  std::uint64_t points_seed = 0;
  double t = 0.0;
  std::string out;
  unsigned workers = 1;
  bool no_timing = false;
  bool self_test = false;
  bool no_limits = false;
};

int run_pde_error(const PdeFlags& fl) {
  if (fl.problem != "heat-quadratic") throw UsageError("unknown problem '" + fl.problem + "'");
  if (fl.direction != "terminal" && fl.direction != "initial")
    throw UsageError("--direction expects terminal or initial");
  lab::PdeProblem prob;
  std::vector<lab::Level> levels;
  try {
    prob = lab::PdeProblem::heat_quadratic(fl.d, fl.c, fl.horizon, fl.lambda);
    levels = lab::parse_levels(fl.levels);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  prob.direction = fl.direction == "initial" ? lab::Direction::Initial : lab::Direction::Terminal;
  if (!fl.no_limits) {
    if (fl.d > 10) throw UsageError("--d above 10 needs --no-limits");
    if (fl.samples > 1000000) throw UsageError("--samples above 10^6 needs --no-limits");
    for (const auto& l : levels)
      if (l.n > 4 || l.M > 4) throw UsageError("levels above n = M = 4 need --no-limits");
  }
  lab::ConvergenceOptions opts;
  opts.p = fl.p;
  opts.eval_points = fl.samples;
  opts.points_seed = fl.points_seed;
  opts.t = fl.t;
  opts.workers = fl.workers;
  opts.timing = !fl.no_timing;
  opts.self_test = fl.self_test;
  std::vector<std::uint64_t> seeds = fl.seeds;
  if (seeds.empty()) seeds.push_back(default_seed());
  const auto rows = lab::convergence_experiment(prob, levels, seeds, opts);
  write_text(fl.out, lab::to_csv(rows));
  json summary;
  summary["reference_norm"] = lab::reference_lp_norm(prob, opts);
  summary["rows"] = rows.size();
  std::cerr << summary.dump() << "\n";
  return 0;
}

int run_sampler_check(const std::vector<std::size_t>& dims, const std::vector<unsigned>& gammas,
                      const std::vector<double>& times, std::size_t samples, std::uint64_t seed) {
  bool all = true;
  for (std::size_t d : dims)
    for (unsigned g : gammas)
      for (double s : times) {
        lab::MomentCheck c;
        try {
          c = lab::brownian_moment_check(d, s, g, samples, seed);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        json j;
        j["d"] = d;
        j["gamma"] = g;
        j["s"] = s;
        j["samples"] = samples;
        j["empirical"] = c.empirical;
        j["expected"] = c.expected;
        j["std_error"] = c.std_error;
        j["pass"] = c.pass;
        std::cout << j.dump() << "\n";
        all = all && c.pass;
      }
  return all ? 0 : 1;
}

struct InterpFlags {
  std::string fn = "sin";
  double L = 1.0;
  double q = 2.0;
  double eps = 0.1;
  std::string activation = "relu";
  std::string out;
  std::string report;
  double audit_range = 50.0;
  std::size_t audit_points = 10000;
};

interp::LipschitzFn named_function(const std::string& name, double L) {
  if (name == "sin") return {[](double x) { return std::sin(x); }, L};
  if (name == "cos") return {[](double x) { return std::cos(x); }, L};
  if (name == "abs") return {[](double x) { return std::abs(x); }, L};
  if (name == "tanh") return {[](double x) { return std::tanh(x); }, L};
  if (name == "zero") return {[](double) { return 0.0; }, L};
  throw UsageError("--fn expects sin, cos, abs, tanh or zero");
}

int run_interp_build(const InterpFlags& fl) {
  const Activation act = parse_activation(fl.activation);
  const interp::LipschitzFn f = named_function(fl.fn, fl.L);
  interp::ApproxNet a{affine_scalar(0.0, 0.0), {}};
  try {
    switch (act.kind()) {
      case ActivationKind::ReLU:
        a = interp::approx_net_relu(f, fl.q, fl.eps);
        break;
      case ActivationKind::LeakyReLU:
        a = interp::approx_net_leaky(f, fl.q, fl.eps, act.alpha());
        break;
      case ActivationKind::Softplus:
        a = interp::approx_net_softplus(f, fl.q, fl.eps);
        break;
      case ActivationKind::RePU:
        throw UsageError("interp-build supports relu, leaky and softplus");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto& g = a.guarantee;
  double worst = 0.0;
  for (std::size_t i = 0; i < fl.audit_points; ++i) {
    const double x = -fl.audit_range + 2.0 * fl.audit_range * static_cast<double>(i) / static_cast<double>(fl.audit_points - 1);
    worst = std::max(worst, std::abs(realize_scalar(a.net, act, x) - f.eval(x)) / std::max(1.0, std::pow(std::abs(x), fl.q)));
  }
  const double error_bound = g.error_factor * g.eps;
  json r;
  r["fn"] = fl.fn;
  r["activation"] = act.tag();
  r["L"] = g.lipschitz;
  r["q"] = g.q;
  r["eps"] = g.eps;
  r["b"] = g.b;
  r["K"] = g.K;
  r["dims"] = a.net.dims().entries();
  r["width"] = g.width;
  r["params"] = g.params;
  r["width_bound"] = g.width_bound;
  r["params_bound"] = g.params_bound;
  r["weighted_error"] = worst;
  r["weighted_error_bound"] = error_bound;
  const bool ok = g.sizes_within_bounds() && worst <= error_bound * (1.0 + 1e-9);
  r["pass"] = ok;
  if (!fl.out.empty()) save_network(fl.out, a.net, act);
  if (!fl.report.empty()) write_text(fl.report, r.dump(2) + "\n");
  if (!ok) throw CheckFailed(r);
  std::cout << r.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep networks that reproduce multilevel Picard approximations"};
  app.require_subcommand(1);

  NetFlags net_flags;
  std::string out, report;
  bool prune = false;
  std::size_t probes = 20;
  double tol = 1e-8;
  std::string points_path;
  std::vector<std::uint64_t> seeds;
  unsigned workers = 1;
  PdeFlags pde;
  std::vector<std::size_t> sc_dims{1, 2, 5, 10};
  std::vector<unsigned> sc_gammas{1, 2};
  std::vector<double> sc_times{0.25, 1.0};
  std::size_t sc_samples = 100000;
  InterpFlags ib;

  auto* compile = app.add_subcommand("compile", "Compile an MLP approximation into a network");
  add_problem_flags(compile, net_flags);
  compile->add_option("--out", out, "Network JSON")->required();
  compile->add_option("--report", report, "Size report JSON");
  compile->add_flag("--prune", prune, "Drop structurally zero neurons");
  compile->add_flag("--allow-large", net_flags.allow_large, "Lift the parameter-bound guard");

  auto* verify = app.add_subcommand("verify", "Check a compiled network against the estimator");
  add_problem_flags(verify, net_flags);
  verify->add_option("--probes", probes, "Probe count")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "Relative tolerance");
  verify->add_flag("--allow-large", net_flags.allow_large, "Lift the parameter-bound guard");

  auto* mlp_cmd = app.add_subcommand("mlp", "Evaluate the estimator at points from a file");
  add_problem_flags(mlp_cmd, net_flags);
  mlp_cmd->add_option("--points", points_path, "Whitespace or comma separated points, one per line")->required();
  mlp_cmd->add_option("--seeds", seeds, "Comma separated seeds")->delimiter(',');
  mlp_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
  mlp_cmd->add_option("--out", out, "CSV output (default stdout)");

  auto* pde_cmd = app.add_subcommand("pde-error", "Lp error of the estimator against a closed-form solution");
  pde_cmd->add_option("--problem", pde.problem, "heat-quadratic");
  pde_cmd->add_option("--d", pde.d, "Dimension")->check(CLI::PositiveNumber);
  pde_cmd->add_option("--c", pde.c, "Diffusion coefficient");
  pde_cmd->add_option("--horizon", pde.horizon, "Horizon T");
  pde_cmd->add_option("--lambda", pde.lambda, "Nonlinearity f(u) = lambda u");
  pde_cmd->add_option("--direction", pde.direction, "terminal | initial");
  pde_cmd->add_option("--p", pde.p, "Exponent p");
  pde_cmd->add_option("--levels", pde.levels, "n1:m1,n2:m2,...");
  pde_cmd->add_option("--seeds", pde.seeds, "Comma separated seeds")->delimiter(',');
  pde_cmd->add_option("--samples", pde.samples, "Evaluation points")->check(CLI::PositiveNumber);
  pde_cmd->add_option("--points-seed", pde.points_seed, "Seed of the evaluation points");
  pde_cmd->add_option("--t", pde.t, "Evaluation time");
  pde_cmd->add_option("--out", pde.out, "CSV output (default stdout)");
  pde_cmd->add_option("--workers", pde.workers, "Worker threads (0 = all cores)");
  pde_cmd->add_flag("--no-timing", pde.no_timing, "Write wall_ms = 0");
  pde_cmd->add_flag("--self-test", pde.self_test, "Use the reference as the approximation");
  pde_cmd->add_flag("--no-limits", pde.no_limits, "Lift the desk-scale limits");

  auto* sampler = app.add_subcommand("sampler-check", "Compare Brownian norm moments with their closed form");
  std::uint64_t sampler_seed = 0;
  sampler->add_option("--d", sc_dims, "Dimensions")->delimiter(',');
  sampler->add_option("--gamma", sc_gammas, "Moment orders")->delimiter(',');
  sampler->add_option("--s", sc_times, "Times")->delimiter(',');
  sampler->add_option("--samples", sc_samples, "Samples per check");
  sampler->add_option("--seed", sampler_seed, "Seed");

  auto* ibuild = app.add_subcommand("interp-build", "Build a Lipschitz approximation net and audit its guarantees");
  ibuild->add_option("--fn", ib.fn, "sin | cos | abs | tanh | zero");
  ibuild->add_option("--L", ib.L, "Lipschitz constant");
  ibuild->add_option("--q", ib.q, "Growth exponent q > 1");
  ibuild->add_option("--eps", ib.eps, "Accuracy in (0,1]");
  ibuild->add_option("--activation", ib.activation, "relu | leaky:ALPHA | softplus");
  ibuild->add_option("--out", ib.out, "Network JSON");
  ibuild->add_option("--report", ib.report, "Guarantee report JSON");
  ibuild->add_option("--audit-range", ib.audit_range, "Audit grid half-width")->check(CLI::PositiveNumber);
  ibuild->add_option("--audit-points", ib.audit_points, "Audit grid size")->check(CLI::Range(2, 100000000));

  try {
    net_flags.seed = default_seed();
    sampler_seed = net_flags.seed;
    app.parse(argc, argv);
    if (compile->parsed()) return run_compile(net_flags, out, report, prune);
    if (verify->parsed()) return run_verify(net_flags, probes, tol);
    if (mlp_cmd->parsed()) return run_mlp(net_flags, points_path, seeds, workers, out);
    if (pde_cmd->parsed()) return run_pde_error(pde);
    if (sampler->parsed()) return run_sampler_check(sc_dims, sc_gammas, sc_times, sc_samples, sampler_seed);
    if (ibuild->parsed()) return run_interp_build(ib);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CheckFailed& e) {
    std::cout << e.report.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json j;
    j["error"] = e.what();
    std::cout << j.dump() << "\n";
    return 1;
  }
  return 2;
}
