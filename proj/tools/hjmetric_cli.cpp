// Batch command surface: one subcommand per pillar (critical / effective /
// aubry / corrector / curve / ergodic).  Reads a JSON config, writes JSON
// summaries and CSV tables into the output directory.  Exit codes: 0 on
// success, 2 on configuration errors, 3 on numerical failures.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hjmetric/aubry.hpp"
#include "hjmetric/corrector.hpp"
#include "hjmetric/critical.hpp"
#include "hjmetric/stats.hpp"

namespace {

using nlohmann::json;
using namespace hjm;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Stencil parse_stencil(const std::string& name) {
  if (name == "axis") return Stencil::axis;
  if (name == "axis_diag") return Stencil::axis_diag;
  if (name == "knight16") return Stencil::knight16;
  throw ConfigError("unknown stencil: " + name);
}

struct Experiment {
  HamiltonianModel model;
  GridWindow window;
  EnvPoint omega;
  double level_tol = 1e-3;
  std::uint64_t seed = 1;
  json raw;
};

Experiment load_experiment(const std::string& path, std::uint64_t seed_override,
                           const std::string& stencil_override,
                           double level_tol_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }

  try {
    const auto& m = cfg.at("model");
    if (m.at("kind").get<std::string>() != "eikonal")
      throw ConfigError("only the eikonal model kind is configurable");
    auto potential = ap_series_from_text(m.at("potential").dump());
    int dim = m.value("dim", 1);

    const auto& w = cfg.at("window");
    Stencil st = parse_stencil(stencil_override.empty()
                                   ? w.value("stencil", std::string("axis"))
                                   : stencil_override);
    GridWindow window =
        w.value("periodic", true)
            ? GridWindow::periodic_cell(dim, w.at("h").get<double>(), st)
            : GridWindow::free_box(dim, w.at("R").get<double>(),
                                   w.at("h").get<double>(), st);

    Experiment exp{HamiltonianModel::eikonal(potential, dim), window,
                   origin_env(*potential.space),
                   level_tol_override > 0.0 ? level_tol_override
                                            : cfg.value("level_tol", 1e-3),
                   seed_override != 0 ? seed_override
                                      : cfg.value("seed", std::uint64_t{1}),
                   cfg};
    if (cfg.contains("omega_seed"))
      exp.omega = sample_env(*potential.space, cfg.at("omega_seed").get<std::uint64_t>());
    return exp;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string field_csv(const GridWindow& window, const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  os << "node,x0,x1,value\n";
  for (int v = 0; v < window.node_count(); ++v) {
    Vec x = window.coords(v);
    os << v << ',' << x[0] << ',' << x[1] << ',' << values[v] << '\n';
  }
  return os.str();
}

std::vector<Vec> build_p_grid(const json& cfg, int dim) {
  const auto& pg = cfg.at("p_grid");
  double lo = pg.at("min").get<double>();
  double hi = pg.at("max").get<double>();
  double step = pg.at("step").get<double>();
  if (step <= 0.0 || hi < lo) throw ConfigError("p_grid: need step > 0 and max >= min");
  std::vector<double> axis;
  for (double p = lo; p <= hi + 1e-12; p += step) axis.push_back(p);
  std::vector<Vec> grid;
  if (dim == 1) {
    for (double p : axis) grid.push_back(vec1(p));
  } else {
    for (double p : axis)
      for (double q : axis) grid.push_back(vec2(p, q));
  }
  return grid;
}

int run_critical(const Experiment& exp, const std::filesystem::path& out) {
  std::vector<BisectionProbe> trace;
  double c_f = free_critical_value(exp.window, exp.model, exp.omega, exp.level_tol,
                                   {0.0, 0.0}, &trace);
  auto vals = stationary_critical_value(exp.window, exp.model, exp.omega, exp.level_tol);

  json summary = {{"c_f", c_f},
                  {"c", vals.c},
                  {"tolerance", exp.level_tol},
                  {"probes", trace.size()}};
  write_text(out / "critical.json", summary.dump(2) + "\n");

  std::ostringstream csv;
  csv.precision(17);
  csv << "level,feasible,cycle_mean\n";
  for (const auto& p : trace)
    csv << p.level << ',' << (p.feasible ? 1 : 0) << ',' << p.cycle_mean << '\n';
  write_text(out / "bisection_trace.csv", csv.str());
  std::cout << "c_f = " << c_f << "  c = " << vals.c << "\n";
  return 0;
}

int run_effective(const Experiment& exp, const std::filesystem::path& out) {
  auto grid = build_p_grid(exp.raw, exp.window.dim);
  auto table = sample_effective(exp.window, exp.model, exp.omega, grid, exp.level_tol);
  auto region = flat_region(table, 2.0 * exp.level_tol);

  std::ostringstream csv;
  csv.precision(17);
  csv << "P0,P1,Hbar\n";
  for (const auto& [P, hbar] : table.samples)
    csv << P[0] << ',' << P[1] << ',' << hbar << '\n';
  write_text(out / "effective.csv", csv.str());

  json summary = {{"min_value", region.min_value},
                  {"flat_samples", region.sublevel.size()},
                  {"zero_in_interior", region.zero_in_interior},
                  {"tolerance", table.tolerance}};
  write_text(out / "effective.json", summary.dump(2) + "\n");
  std::cout << "min Hbar = " << region.min_value
            << "  zero_in_interior = " << region.zero_in_interior << "\n";
  return 0;
}

int run_aubry(const Experiment& exp, const std::filesystem::path& out) {
  auto vals = stationary_critical_value(exp.window, exp.model, exp.omega, exp.level_tol);
  auto g = build_graph(exp.window, exp.model, exp.omega, vals.c_f);

  AubryReport rep;
  rep.level = vals.c_f;
  rep.tol = default_aubry_tol(g);
  rep.delta = default_aubry_delta(exp.window);
  rep.r_max = exp.raw.value("r_max", exp.window.periodic ? 0.4 : exp.window.extent);
  rep.equilibria = equilibria(exp.window, exp.model, exp.omega, vals.c_f, exp.level_tol);
  rep.classical_aubry = classical_aubry(g, rep.delta, rep.tol);

  std::vector<int> classical_nodes;
  for (const auto& [node, _] : rep.classical_aubry) classical_nodes.push_back(node);
  int ensemble = exp.raw.value("ensemble", 4);
  rep.random_aubry_approx = random_aubry_approx(
      g, ensemble, rep.r_max, rep.tol, exp.seed,
      vals.c <= vals.c_f + exp.level_tol ? classical_nodes : std::vector<int>{});

  json cost_list = json::array();
  for (const auto& [node, cost] : rep.classical_aubry)
    cost_list.push_back({{"node", node}, {"cost", cost}});
  json summary = {{"level", rep.level},
                  {"delta", rep.delta},
                  {"tol", rep.tol},
                  {"r_max", rep.r_max},
                  {"equilibria", rep.equilibria},
                  {"classical_aubry", cost_list},
                  {"random_aubry_approx", rep.random_aubry_approx}};
  write_text(out / "aubry.json", summary.dump(2) + "\n");

  std::vector<double> mask(g.num_nodes, 0.0);
  for (int v : rep.random_aubry_approx) mask[v] = 1.0;
  write_text(out / "aubry_mask.csv", field_csv(exp.window, mask));
  std::cout << "classical " << rep.classical_aubry.size() << " nodes, random approx "
            << rep.random_aubry_approx.size() << " nodes\n";
  return 0;
}

int run_corrector(const Experiment& exp, const std::filesystem::path& out) {
  auto vals = stationary_critical_value(exp.window, exp.model, exp.omega, exp.level_tol);
  auto g = build_graph(exp.window, exp.model, exp.omega, vals.c);
  double tol = default_corrector_tol(g);
  auto aubry = classical_aubry(g, default_aubry_delta(exp.window), default_aubry_tol(g));
  if (aubry.empty()) {
    std::cerr << "corrector: empty Aubry source set at the critical level\n";
    return kExitNumerical;
  }
  std::vector<std::pair<int, double>> trace;
  for (const auto& [node, _] : aubry) trace.push_back({node, 0.0});
  auto u = lax_extension(g, trace);
  auto rep = verify_field(g, u, tol);

  json summary = {{"level", vals.c},
                  {"tol", tol},
                  {"is_subsolution", rep.is_subsolution},
                  {"is_corrector", rep.is_corrector},
                  {"max_excess", rep.max_excess},
                  {"max_deficit", rep.max_deficit},
                  {"delta_level", rep.delta_level},
                  {"worst_node", rep.worst_node}};
  write_text(out / "corrector.json", summary.dump(2) + "\n");
  write_text(out / "corrector_field.csv", field_csv(exp.window, u.values));
  std::cout << "is_corrector = " << rep.is_corrector << "  max residual "
            << std::max(rep.max_excess, rep.max_deficit) << "\n";
  return 0;
}

int run_curve(const Experiment& exp, const std::filesystem::path& out) {
  auto vals = stationary_critical_value(exp.window, exp.model, exp.omega, exp.level_tol);
  auto g = build_graph(exp.window, exp.model, exp.omega, vals.c);
  double tol = default_corrector_tol(g);
  auto aubry = classical_aubry(g, default_aubry_delta(exp.window), default_aubry_tol(g));
  if (aubry.empty()) {
    std::cerr << "curve: empty Aubry set at the critical level\n";
    return kExitNumerical;
  }
  std::vector<std::pair<int, double>> trace;
  std::vector<int> aubry_nodes;
  for (const auto& [node, _] : aubry) {
    trace.push_back({node, 0.0});
    aubry_nodes.push_back(node);
  }
  auto u = lax_extension(g, trace);
  int start = exp.raw.value("curve_start", aubry_nodes.front());
  auto curve = calibrated_curve(g, u, start, aubry_nodes, g.num_nodes, tol);

  std::ostringstream csv;
  csv.precision(17);
  csv << "t,node,x0,x1,cumulative_action\n";
  for (std::size_t i = 0; i < curve.nodes.size(); ++i) {
    Vec x = exp.window.coords(curve.nodes[i]);
    csv << curve.times[i] << ',' << curve.nodes[i] << ',' << x[0] << ',' << x[1]
        << ',' << curve.actions[i] << '\n';
  }
  write_text(out / "curve.csv", csv.str());
  json summary = {{"nodes", curve.nodes.size()},
                  {"total_action", curve.total_action},
                  {"endpoint_distance", curve.endpoint_distance},
                  {"tol", tol}};
  write_text(out / "curve.json", summary.dump(2) + "\n");
  std::cout << "curve with " << curve.nodes.size() << " nodes, action "
            << curve.total_action << "\n";
  return 0;
}

int run_ergodic(const Experiment& exp, const std::filesystem::path& out) {
  const auto& space = *exp.model.potential().space;
  int n_steps = exp.raw.value("equidist_steps", 10000);
  std::vector<TrigProbe> probes;
  for (int j = 0; j < space.k(); ++j) probes.push_back({1.0, j, 1, 0.0});
  auto reports = equidistribution_test(space, vec1(0.1), n_steps, probes);

  double threshold = exp.raw.value("threshold", 0.5);
  RandomSetSampler sampler;
  sampler.window = exp.window;
  sampler.space = exp.model.potential().space;
  const auto model = exp.model;
  sampler.predicate = [model, threshold](Vec x, const EnvPoint& w) {
    return model.potential_at(x, w) >= threshold;
  };
  auto spatial = volume_fraction_spatial(sampler, exp.omega,
                                         exp.window.periodic ? 0.5 : exp.window.extent);
  auto prob = volume_fraction_probabilistic(sampler, {0.0, 0.0},
                                            exp.raw.value("mc_samples", 2000), exp.seed);

  json eq = json::array();
  for (const auto& r : reports)
    eq.push_back({{"birkhoff", r.birkhoff_avg}, {"mean", r.space_avg}, {"gap", r.gap}});
  json summary = {{"equidistribution", eq},
                  {"volume_fraction_spatial",
                   {{"value", spatial.value}, {"stderr", spatial.stderr_value}}},
                  {"volume_fraction_probabilistic",
                   {{"value", prob.value}, {"stderr", prob.stderr_value}}}};
  write_text(out / "ergodic.json", summary.dump(2) + "\n");
  std::cout << "volume fraction spatial " << spatial.value << " probabilistic "
            << prob.value << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric-method experiments on grid windows"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string stencil_name;
  std::uint64_t seed = 0;
  int threads = 1;
  double level_tol = 0.0;
  app.add_option("--config", config_path, "experiment config JSON")->required();
  app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (reserved)");
  app.add_option("--stencil", stencil_name, "stencil override: axis|axis_diag|knight16");
  app.add_option("--level-tol", level_tol, "bisection tolerance override");

  auto* critical = app.add_subcommand("critical", "free and stationary critical values");
  auto* effective = app.add_subcommand("effective", "effective Hamiltonian P-sweep");
  auto* aubry = app.add_subcommand("aubry", "equilibria and Aubry sets");
  auto* corrector = app.add_subcommand("corrector", "Lax extension and verification");
  auto* curve = app.add_subcommand("curve", "calibrated curve extraction");
  auto* ergodic = app.add_subcommand("ergodic", "equidistribution and volume fractions");

  CLI11_PARSE(app, argc, argv);

  try {
    Experiment exp = load_experiment(config_path, seed, stencil_name, level_tol);
    std::filesystem::path out(out_dir);
    if (critical->parsed()) return run_critical(exp, out);
    if (effective->parsed()) return run_effective(exp, out);
    if (aubry->parsed()) return run_aubry(exp, out);
    if (corrector->parsed()) return run_corrector(exp, out);
    if (curve->parsed()) return run_curve(exp, out);
    if (ergodic->parsed()) return run_ergodic(exp, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BracketError& e) {
    std::cerr << "numerical failure: " << e.what() << " [" << e.bracket_lo << ", "
              << e.bracket_hi << "]\n";
    return kExitNumerical;
  } catch (const NegativeCycleError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
