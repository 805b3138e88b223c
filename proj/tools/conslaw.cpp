#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conslaw/acceptance.hpp"
#include "conslaw/characteristics.hpp"
#include "conslaw/degiorgi.hpp"
#include "conslaw/entropy.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/harness.hpp"
#include "conslaw/initial_conditions.hpp"
#include "conslaw/io.hpp"
#include "conslaw/kinetic.hpp"
#include "conslaw/report.hpp"
#include "conslaw/scaling.hpp"
#include "conslaw/solver.hpp"
#include "conslaw/structure.hpp"

using namespace conslaw;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitModule = 3;

struct LoadedRun {
  ExperimentConfig config;
  FluxSpec flux;
  Trajectory traj;
};

LoadedRun load_run(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw InputError("no manifest.json in " + dir.string());
  json m;
  in >> m;
  LoadedRun r;
  r.config = parse_config(m.at("config").dump());
  r.flux = make_flux(r.config.flux);
  r.traj = read_trajectory(dir / "trajectory.bin", r.config.flux, r.config.solver);
  return r;
}

std::optional<double> auto_or_value(const std::string& s) {
  if (s.empty() || s == "auto") return std::nullopt;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw InputError("expected a number or 'auto', got '" + s + "'");
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    const auto eq = it.find('=');
    if (eq == std::string::npos) throw InputError("--param expects key=value, got '" + it + "'");
    out[it.substr(0, eq)] = std::stod(it.substr(eq + 1));
  }
  return out;
}

/// Options shared by verbs that build a fresh experiment.
struct SetupOptions {
  std::string flux = "burgers";
  std::string ic = "decay_example";
  std::vector<std::string> params;
  std::size_t n = 1024;
  std::size_t dim = 1;
  std::vector<double> lo, hi;
  double t_end = 1.0;
  double cfl = 0.45;
  std::string boundary = "outflow";
  std::string numerical_flux = "engquist_osher";
  bool every_step = false;
  std::uint64_t seed = 0;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--flux", flux, "Flux key (burgers, power:m, generalized_burgers:d, trig)");
    app->add_option("--ic", ic, "Initial condition key");
    app->add_option("--param", params, "Initial condition parameter key=value (repeatable)");
    app->add_option("--n", n, "Cells per axis (power of two)");
    app->add_option("--dim", dim, "Spatial dimension");
    app->add_option("--lo", lo, "Domain lower corner")->delimiter(',');
    app->add_option("--hi", hi, "Domain upper corner")->delimiter(',');
    app->add_option("--t-end", t_end, "Final time");
    app->add_option("--cfl", cfl, "CFL number");
    app->add_option("--boundary", boundary, "outflow or periodic");
    app->add_option("--numerical-flux", numerical_flux, "engquist_osher or godunov");
    app->add_flag("--every-step", every_step, "Record every time step with a uniform dt");
    app->add_option("--seed", seed, "Seed for randomized initial conditions");
    app->add_option("--out", out, "Run directory");
  }

  ExperimentConfig config(const std::string& name) const {
    ExperimentConfig c;
    c.name = name;
    c.flux = flux;
    c.ic.key = ic;
    c.ic.params = parse_params(params);
    c.ic.seed = seed;
    c.n = n;
    c.dim = dim;
    c.lo = lo;
    c.hi = hi;
    c.t_end = t_end;
    c.solver.cfl = cfl;
    c.solver.boundary = parse_boundary(boundary);
    c.solver.numerical_flux = parse_numerical_flux(numerical_flux);
    c.solver.record_every_step = every_step;
    c.solver.uniform_dt = every_step;
    c.seed = seed;
    c.output_dir = out.empty() ? "runs/" + name : out;
    return c;
  }
};

int finish_run(const RunResult& r) {
  for (const auto& e : r.errors) std::cerr << "error: " << e << '\n';
  std::cout << r.dir.string() << ": " << (r.checks - r.failed_checks) << " / " << r.checks << " checks passed\n";
  if (!r.errors.empty()) return kExitModule;
  return r.ok ? 0 : kExitChecksFailed;
}

fs::path out_path(const std::string& out, const fs::path& run, const std::string& fallback) {
  if (out.empty()) return run / fallback;
  fs::path p(out);
  if (fs::is_directory(p)) return p / fallback;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

json flux_report(const std::string& key, std::size_t xi_samples, std::size_t v_samples) {
  const FluxSpec f = make_flux(key);
  json j;
  j["flux"] = f.name;
  j["dim"] = f.dim;
  j["time_augmented"] = f.time_augmented;
  j["interval"] = {f.interval.lo, f.interval.hi};
  const auto rep = estimate_alpha(f, xi_samples, default_delta_grid(), v_samples);
  j["alpha_hat"] = rep.alpha_hat;
  j["C_hat"] = rep.C_hat;
  j["degenerate"] = rep.sample_grid.degenerate;
  j["notes"] = rep.sample_grid.notes;
  const int m = hormander_order(f);
  j["hormander_order"] = m;
  if (m <= f.m_max) {
    j["c0"] = nondegeneracy_constant(f);
    const auto map = build_scaling(f, 0.5);
    j["scaling_indexes"] = map.indexes;
    j["q"] = map.q;
    j["v0"] = std::isfinite(map.v0) ? json(map.v0) : json("inf");
    if (f.time_augmented) j["gamma_zero"] = gamma_zero(f);
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for genuinely nonlinear scalar conservation laws"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // solve
  SetupOptions solve_opts;
  std::vector<double> snapshots;
  auto* solve_cmd = app.add_subcommand("solve", "Solve and write trajectory.bin, final_frame.csv and manifest.json");
  solve_opts.add(solve_cmd);
  solve_cmd->add_option("--snapshots", snapshots, "Snapshot times")->delimiter(',');

  // dissipation
  std::string run_dir, out;
  std::size_t levels = 64;
  auto* diss_cmd = app.add_subcommand("dissipation", "Kinetic entropy dissipation measure of a run");
  diss_cmd->add_option("--run", run_dir, "Run directory")->required();
  diss_cmd->add_option("--levels", levels, "Number of velocity levels");
  diss_cmd->add_option("--out", out, "Output CSV (t_index, cell_index, level_index, mass)");

  // structure
  std::vector<double> radii_cells{1.0};
  std::string threshold = "auto";
  std::vector<double> trace_x;
  auto* struct_cmd = app.add_subcommand("structure", "Jump set of a run's dissipation measure");
  struct_cmd->add_option("--run", run_dir, "Run directory")->required();
  struct_cmd->add_option("--radii", radii_cells, "Radii in cells")->delimiter(',');
  struct_cmd->add_option("--threshold", threshold, "Flag threshold or 'auto'");
  struct_cmd->add_option("--levels", levels, "Number of velocity levels");
  struct_cmd->add_option("--trace", trace_x, "Blowup trace at this point of the final frame")->delimiter(',');
  struct_cmd->add_option("--out", out, "Output directory");

  // degiorgi
  std::string U = "auto";
  int K = 25;
  auto* dg_cmd = app.add_subcommand("degiorgi", "De Giorgi truncation ladder of a run's final frame");
  dg_cmd->add_option("--run", run_dir, "Run directory")->required();
  dg_cmd->add_option("--U", U, "Top level or 'auto' (2 sup over B_1)");
  dg_cmd->add_option("--K", K, "Ladder length");
  dg_cmd->add_option("--out", out, "Output CSV (k, ell_k, r_k, A_k)");

  // char
  std::vector<double> x0;
  std::string v0 = "auto";
  int k = 64;
  auto* char_cmd = app.add_subcommand("char", "Backward characteristic polygon from the final time");
  char_cmd->add_option("--run", run_dir, "Run directory")->required();
  char_cmd->add_option("--x0", x0, "Start point")->required()->delimiter(',');
  char_cmd->add_option("--v0", v0, "Level or 'auto' (u(T, x0))");
  char_cmd->add_option("--k", k, "Number of time steps");
  char_cmd->add_option("--out", out, "Output CSV");

  // decay
  SetupOptions decay_opts;
  std::size_t samples = 33;
  double origin = 0.0;
  std::optional<double> t_min, t_max, expected_gamma;
  auto* decay_cmd = app.add_subcommand("decay", "Large-time sup-norm decay and exponent fit");
  decay_opts.add(decay_cmd);
  decay_cmd->add_option("--samples", samples, "Number of sample times");
  decay_cmd->add_option("--origin", origin, "Time origin of the power law");
  decay_cmd->add_option("--t-min", t_min, "Fit window start");
  decay_cmd->add_option("--t-max", t_max, "Fit window end");
  decay_cmd->add_option("--expect", expected_gamma, "Expected exponent (adds a check)");

  // scale
  std::string scale_flux = "burgers", in_file;
  double lambda = 0.5, r = 1.0;
  auto* scale_cmd = app.add_subcommand("scale", "Apply u -> lambda^-1 u(r S_lambda x) to a field CSV");
  scale_cmd->add_option("--flux", scale_flux, "Flux key")->required();
  scale_cmd->add_option("--lambda", lambda, "Scaling parameter")->required();
  scale_cmd->add_option("--r", r, "Radius")->required();
  scale_cmd->add_option("--in", in_file, "Input field CSV")->required();
  scale_cmd->add_option("--out", out, "Output field CSV")->required();

  // flux-report
  std::string report_flux = "burgers";
  std::size_t xi_samples = 256, v_samples = 20001;
  auto* fr_cmd = app.add_subcommand("flux-report", "Nonlinearity, Hormander order, c0 and scaling data of a flux");
  fr_cmd->add_option("--flux", report_flux, "Flux key")->required();
  fr_cmd->add_option("--xi-samples", xi_samples, "Direction samples");
  fr_cmd->add_option("--v-samples", v_samples, "Velocity samples");

  // accept
  std::vector<int> criteria;
  bool verbose = false;
  auto* acc_cmd = app.add_subcommand("accept", "Run the acceptance suite");
  acc_cmd->add_option("--criteria", criteria, "Criterion ids (default all)")->delimiter(',');
  acc_cmd->add_flag("-v,--verbose", verbose, "Print every sub-check");

  // run / report
  std::string preset, config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config or preset");
  run_cmd->add_option("--preset", preset, "Preset name");
  run_cmd->add_option("--config", config_path, "Config JSON path");
  run_cmd->add_option("--out", out, "Run directory (overrides output_dir)");
  auto* list_cmd = app.add_subcommand("presets", "List shipped presets");
  std::string format = "md";
  auto* report_cmd = app.add_subcommand("report", "Consolidated report of a run directory");
  report_cmd->add_option("--run", run_dir, "Run directory")->required();
  report_cmd->add_option("--format", format, "json, csv or md");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      auto c = solve_opts.config("solve");
      c.snapshots = snapshots;
      return finish_run(run_experiment(c));
    }
    if (*diss_cmd) {
      const auto run = load_run(run_dir);
      const auto& fr = run.traj.frames;
      double lo = fr.front().min(), hi = fr.front().max();
      for (const auto& f : fr) lo = std::min(lo, f.min()), hi = std::max(hi, f.max());
      const auto mu = entropy_dissipation(run.traj, run.flux, default_levels(lo, hi, levels));
      std::vector<std::vector<double>> rows;
      for (const auto& e : mu.entries)
        rows.push_back({static_cast<double>(e.t_index), static_cast<double>(e.cell), static_cast<double>(e.level), e.mass});
      const auto path = out_path(out, run_dir, "mu.csv");
      write_csv(path, {"t_index", "cell_index", "level_index", "mass"}, rows);
      std::cout << "total " << format_double(mu.total) << " clipped " << format_double(mu.clipped_total) << " -> "
                << path.string() << '\n';
      return 0;
    }
    if (*struct_cmd) {
      const auto run = load_run(run_dir);
      const auto& fr = run.traj.frames;
      double lo = fr.front().min(), hi = fr.front().max();
      for (const auto& f : fr) lo = std::min(lo, f.min()), hi = std::max(hi, f.max());
      const auto mu = entropy_dissipation(run.traj, run.flux, default_levels(lo, hi, levels));
      const double h = fr.front().grid().max_spacing();
      std::vector<double> radii;
      for (double rc : radii_cells) radii.push_back(rc * h);
      std::sort(radii.begin(), radii.end(), std::greater<>());
      const auto th = auto_or_value(threshold).value_or(default_jump_threshold(lo, hi));
      const auto mask = jump_set(mu, radii, th);
      const fs::path dir = out.empty() ? fs::path(run_dir) : fs::path(out);
      fs::create_directories(dir);
      const std::size_t S = mu.spatial_cells();
      std::vector<std::vector<double>> rows;
      for (auto c : mask.flagged_cells())
        rows.push_back({static_cast<double>(c / S), static_cast<double>(c % S), mask.score[c]});
      write_csv(dir / "mask.csv", {"t_index", "cell_index", "score"}, rows);
      json mj = {{"threshold", th}, {"radii", radii}, {"flagged", mask.count()}, {"cells", mask.geometry.size()}};
      if (!trace_x.empty()) {
        std::vector<double> tr;
        for (double rc : {64.0, 32.0, 16.0, 8.0}) tr.push_back(rc * h);
        const auto fit = blowup_trace(fr.back(), trace_x, tr);
        mj["trace"] = {{"center", fit.center},     {"normal", fit.normal},         {"u_plus", fit.u_plus},
                       {"u_minus", fit.u_minus},   {"residual", fit.residual},     {"single_shock", fit.single_shock}};
      }
      std::ofstream(dir / "mask.json") << mj.dump(2) << '\n';
      std::cout << mask.count() << " flagged cells of " << mask.geometry.size() << " (threshold " << format_double(th)
                << ")\n";
      return 0;
    }
    if (*dg_cmd) {
      const auto run = load_run(run_dir);
      const auto& f = run.traj.frames.back();
      const BallFrame frame = inscribed_frame(f.grid());
      double top = auto_or_value(U).value_or(2.0 * degiorgi_norms(f, frame).linf);
      if (top <= 0.0) top = 1.0;
      const auto ladder = truncation_ladder(f, top, K, frame);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < ladder.A.size(); ++i)
        rows.push_back({static_cast<double>(i), ladder.levels[i], ladder.radii[i], ladder.A[i]});
      const auto path = out_path(out, run_dir, "ladder.csv");
      write_csv(path, {"k", "ell_k", "r_k", "A_k"}, rows);
      std::cout << "U " << format_double(top) << " A_K " << format_double(ladder.A.back()) << " grid floor "
                << format_double(grid_floor(run.traj.frames.front())) << '\n';
      return 0;
    }
    if (*char_cmd) {
      const auto run = load_run(run_dir);
      const double level = auto_or_value(v0).value_or(run.traj.frames.back().interpolate(x0));
      const auto poly = backward_characteristic(run.traj, run.flux, x0, level, k);
      std::vector<std::string> header{"t"};
      for (std::size_t a = 0; a < x0.size(); ++a) header.push_back("x" + std::to_string(a));
      header.push_back("value_lo");
      header.push_back("value_hi");
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < poly.times.size(); ++j) {
        std::vector<double> row{poly.times[j]};
        row.insert(row.end(), poly.points[j].begin(), poly.points[j].end());
        row.push_back(j ? poly.segment_lo[j - 1] : poly.segment_lo.front());
        row.push_back(j ? poly.segment_hi[j - 1] : poly.segment_hi.front());
        rows.push_back(row);
      }
      const auto path = out_path(out, run_dir, "polygon.csv");
      write_csv(path, header, rows);
      std::cout << "v0 " << format_double(level) << " chord deviation " << format_double(poly.chord_deviation())
                << " max speed " << format_double(poly.max_speed()) << '\n';
      return 0;
    }
    if (*decay_cmd) {
      auto c = decay_opts.config("decay");
      c.decay.enabled = true;
      c.decay.n_samples = samples;
      c.decay.time_origin = origin;
      c.decay.t_min = t_min;
      c.decay.t_max = t_max;
      c.decay.expected_gamma = expected_gamma;
      return finish_run(run_experiment(c));
    }
    if (*scale_cmd) {
      const FluxSpec f = make_flux(scale_flux);
      const auto field = read_frame_csv(in_file);
      const auto map = build_scaling(f, lambda);
      const auto scaled = apply_scaling(field, r, map);
      write_frame_csv(out, scaled);
      std::cout << "det S " << format_double(map.det) << " -> " << out << '\n';
      return 0;
    }
    if (*fr_cmd) {
      std::cout << flux_report(report_flux, xi_samples, v_samples).dump(2) << '\n';
      return 0;
    }
    if (*acc_cmd) {
      bool all = true;
      for (const auto& res : run_acceptance(criteria)) {
        std::cout << format_result(res, verbose) << std::endl;
        all = all && res.passed;
      }
      return all ? 0 : kExitChecksFailed;
    }
    if (*run_cmd) {
      if (preset.empty() == config_path.empty()) throw InputError("give exactly one of --preset or --config");
      const auto c = load_config(preset.empty() ? fs::path(config_path) : preset_path(preset));
      return finish_run(run_experiment(c, out.empty() ? fs::path() : fs::path(out)));
    }
    if (*list_cmd) {
      for (const auto& p : preset_names()) std::cout << p << '\n';
      return 0;
    }
    if (*report_cmd) {
      std::cout << emit_report(run_dir, parse_report_format(format)).string() << '\n';
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitModule;
  }
  return 0;
}
