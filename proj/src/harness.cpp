#include "conslaw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "conslaw/balls.hpp"
#include "conslaw/characteristics.hpp"
#include "conslaw/decay.hpp"
#include "conslaw/degiorgi.hpp"
#include "conslaw/entropy.hpp"
#include "conslaw/errors.hpp"
#include "conslaw/flux.hpp"
#include "conslaw/io.hpp"
#include "conslaw/kinetic.hpp"
#include "conslaw/structure.hpp"

#ifndef CONSLAW_PRESET_DIR
#define CONSLAW_PRESET_DIR "presets"
#endif

namespace conslaw {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool power_of_two(std::size_t n) { return n && (n & (n - 1)) == 0; }

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw InputError("unknown field '" + it.key() + "' in " + where);
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (j.at(key).is_string() && j.at(key).get<std::string>() == "auto") return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

double ic_speed(const FluxSpec& flux) { return flux.max_spatial_speed(flux.interval.lo, flux.interval.hi); }

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty()) throw InputError("config needs a name");
  const FluxSpec f = make_flux(flux);
  if (dim != f.spatial_dim()) throw InputError("grid dimension does not match the flux's spatial dimension");
  if (dim == 1) {
    if (!power_of_two(n) || n < 64 || n > 16384) throw InputError("1D grid size must be a power of two in 2^6..2^14");
  } else if (dim == 2) {
    if (!power_of_two(n) || n < 32 || n > 1024) throw InputError("2D grid size must be a power of two in 2^5..2^10");
  } else {
    throw InputError("grid dimension must be 1 or 2");
  }
  const auto cat = initial_condition_catalogue();
  if (std::find(cat.begin(), cat.end(), ic.key) == cat.end())
    throw InputError("unknown initial condition '" + ic.key + "'");
  if (!lo.empty() || !hi.empty()) {
    if (lo.size() != dim || hi.size() != dim) throw InputError("domain bounds need one entry per axis");
    for (std::size_t a = 0; a < dim; ++a)
      if (!(hi[a] > lo[a])) throw InputError("domain bounds must satisfy hi > lo");
  }
  if (!(solver.cfl > 0.0 && solver.cfl <= 0.5)) throw InputError("cfl must lie in (0, 0.5]");
  if (!std::isfinite(t_end)) throw InputError("t_end must be finite");
  if (dissipation.enabled && !(solver.record_every_step && solver.uniform_dt))
    throw InputError("the dissipation stage needs record_every_step and uniform_dt");
  if (dissipation.levels < 2) throw InputError("dissipation needs at least two levels");
  if (structure.enabled && !dissipation.enabled) throw InputError("the structure stage needs the dissipation stage");
  if (structure.enabled && structure.radii_cells.empty()) throw InputError("structure needs at least one radius");
  if (!structure.trace_x.empty() && structure.trace_x.size() != dim) throw InputError("trace point rank mismatch");
  if (characteristics.enabled) {
    if (characteristics.x0.size() != dim) throw InputError("characteristics x0 rank mismatch");
    if (characteristics.k < 2) throw InputError("characteristics k must be at least 2");
  }
  if (degiorgi.enabled && (degiorgi.K < 0 || degiorgi.K > 40)) throw InputError("degiorgi K must lie in 0..40");
  if (decay.enabled && decay.n_samples < 5) throw InputError("decay needs at least 5 samples");
}

void default_domain(const ExperimentConfig& c, std::vector<double>& lo, std::vector<double>& hi) {
  const FluxSpec flux = make_flux(c.flux);
  const double speed = ic_speed(flux);
  double l = -1.0, h = 1.0;
  const auto& ic = c.ic;
  const double t0 = ic.key == "rarefaction" ? ic.param("t0", 1.0) : 0.0;
  const double span = std::max(c.t_end - t0, 0.0);
  if (ic.key == "riemann") {
    const double x0 = ic.param("x0", 0.0);
    const double half = std::max(1.0, 1.1 * speed * span);
    l = x0 - half;
    h = x0 + half;
  } else if (ic.key == "rarefaction" || ic.key == "composite") {
    l = -1.0 - speed * span;
    h = 3.0 + speed * std::max(span - 2.0, 0.0);
  } else if (ic.key == "decay_example" || ic.key == "box") {
    const double a = ic.key == "box" ? ic.param("lo", 0.0) : 0.0;
    const double b = ic.key == "box" ? ic.param("hi", 1.0) : 1.0;
    const double half = decay_box_half_width(0.5 * (b - a), speed, span);
    l = 0.5 * (a + b) - half;
    h = 0.5 * (a + b) + half;
  } else if (ic.key == "bump") {
    const double cc = ic.param("c", 0.0), w = ic.param("w", 1.0);
    const double half = decay_box_half_width(w, speed, span);
    l = cc - half;
    h = cc + half;
  } else if (ic.key == "mirror") {
    const double half = decay_box_half_width(ic.param("w", 1.0), speed, span);
    l = -half;
    h = half;
  } else if (ic.key == "random_pc") {
    l = ic.param("lo", -1.0);
    h = ic.param("hi", 1.0);
    if (c.solver.boundary != Boundary::periodic) {
      l -= 1.1 * speed * span;
      h += 1.1 * speed * span;
    }
  }
  lo.assign(c.dim, l);
  hi.assign(c.dim, h);
}

Grid ExperimentConfig::grid() const {
  std::vector<double> l = lo, h = hi;
  if (l.empty()) default_domain(*this, l, h);
  if (dim == 1) return Grid::make_1d(n, l[0], h[0]);
  return Grid::make_2d(n, l[0], h[0], n, l[1], h[1]);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"name", "flux", "ic", "grid", "t_end", "solver", "stages", "seed", "output_dir"}, "config");
  ExperimentConfig c;
  c.name = field<std::string>(j, "name", "");
  c.flux = field<std::string>(j, "flux", "burgers");
  c.t_end = field<double>(j, "t_end", 1.0);
  c.seed = field<std::uint64_t>(j, "seed", 0);
  c.output_dir = field<std::string>(j, "output_dir", "runs/" + c.name);
  if (j.contains("ic")) {
    const auto& ic = j.at("ic");
    reject_unknown(ic, {"key", "params"}, "ic");
    c.ic.key = field<std::string>(ic, "key", "");
    if (ic.contains("params")) {
      reject_unknown(ic.at("params"), {"m", "uL", "uR", "x0", "t0", "height", "lo", "hi", "c", "w", "pieces", "vmin", "vmax"},
                     "ic.params");
      for (auto it = ic.at("params").begin(); it != ic.at("params").end(); ++it) {
        if (!it.value().is_number()) throw InputError("ic parameter '" + it.key() + "' must be a number");
        c.ic.params[it.key()] = it.value().get<double>();
      }
    }
  }
  c.ic.seed = c.seed;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"n", "dim", "lo", "hi"}, "grid");
    c.n = field<std::size_t>(g, "n", 1024);
    c.dim = field<std::size_t>(g, "dim", 1);
    c.lo = field<std::vector<double>>(g, "lo", {});
    c.hi = field<std::vector<double>>(g, "hi", {});
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s, {"cfl", "boundary", "numerical_flux", "record_every_step", "uniform_dt", "fixed_dt", "snapshots"},
                   "solver");
    c.solver.cfl = field<double>(s, "cfl", 0.45);
    c.solver.boundary = parse_boundary(field<std::string>(s, "boundary", "outflow"));
    c.solver.numerical_flux = parse_numerical_flux(field<std::string>(s, "numerical_flux", "engquist_osher"));
    c.solver.record_every_step = field<bool>(s, "record_every_step", false);
    c.solver.uniform_dt = field<bool>(s, "uniform_dt", false);
    c.solver.fixed_dt = optional_field<double>(s, "fixed_dt");
    c.snapshots = field<std::vector<double>>(s, "snapshots", {});
  }
  if (j.contains("stages")) {
    const auto& st = j.at("stages");
    reject_unknown(st, {"dissipation", "structure", "degiorgi", "characteristics", "decay"}, "stages");
    if (st.contains("dissipation")) {
      const auto& d = st.at("dissipation");
      reject_unknown(d, {"levels", "expected_total", "rel_tol"}, "stages.dissipation");
      c.dissipation.enabled = true;
      c.dissipation.levels = field<std::size_t>(d, "levels", 64);
      c.dissipation.expected_total = optional_field<double>(d, "expected_total");
      c.dissipation.rel_tol = field<double>(d, "rel_tol", 0.1);
    }
    if (st.contains("structure")) {
      const auto& d = st.at("structure");
      reject_unknown(d, {"radii_cells", "threshold", "max_flagged", "trace_x", "trace_radii_cells"}, "stages.structure");
      c.structure.enabled = true;
      c.structure.radii_cells = field<std::vector<double>>(d, "radii_cells", {1.0});
      c.structure.threshold = optional_field<double>(d, "threshold");
      c.structure.max_flagged = optional_field<std::size_t>(d, "max_flagged");
      c.structure.trace_x = field<std::vector<double>>(d, "trace_x", {});
      c.structure.trace_radii_cells = field<std::vector<double>>(d, "trace_radii_cells", {64.0, 32.0, 16.0, 8.0});
    }
    if (st.contains("degiorgi")) {
      const auto& d = st.at("degiorgi");
      reject_unknown(d, {"U", "K"}, "stages.degiorgi");
      c.degiorgi.enabled = true;
      c.degiorgi.U = optional_field<double>(d, "U");
      c.degiorgi.K = field<int>(d, "K", 25);
    }
    if (st.contains("characteristics")) {
      const auto& d = st.at("characteristics");
      reject_unknown(d, {"x0", "v0", "k"}, "stages.characteristics");
      c.characteristics.enabled = true;
      c.characteristics.x0 = field<std::vector<double>>(d, "x0", {});
      c.characteristics.v0 = optional_field<double>(d, "v0");
      c.characteristics.k = field<int>(d, "k", 64);
    }
    if (st.contains("decay")) {
      const auto& d = st.at("decay");
      reject_unknown(d, {"n_samples", "time_origin", "t_min", "t_max", "expected_gamma", "gamma_tol"}, "stages.decay");
      c.decay.enabled = true;
      c.decay.n_samples = field<std::size_t>(d, "n_samples", 33);
      c.decay.time_origin = field<double>(d, "time_origin", 0.0);
      c.decay.t_min = optional_field<double>(d, "t_min");
      c.decay.t_max = optional_field<double>(d, "t_max");
      c.decay.expected_gamma = optional_field<double>(d, "expected_gamma");
      c.decay.gamma_tol = field<double>(d, "gamma_tol", 0.02);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

json config_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["flux"] = c.flux;
  j["ic"] = {{"key", c.ic.key}, {"params", c.ic.params}};
  j["grid"] = {{"n", c.n}, {"dim", c.dim}, {"lo", c.lo}, {"hi", c.hi}};
  j["t_end"] = c.t_end;
  json s = {{"cfl", c.solver.cfl},
            {"boundary", to_string(c.solver.boundary)},
            {"numerical_flux", to_string(c.solver.numerical_flux)},
            {"record_every_step", c.solver.record_every_step},
            {"uniform_dt", c.solver.uniform_dt},
            {"snapshots", c.snapshots}};
  put_optional(s, "fixed_dt", c.solver.fixed_dt);
  j["solver"] = s;
  json st = json::object();
  if (c.dissipation.enabled) {
    json d = {{"levels", c.dissipation.levels}, {"rel_tol", c.dissipation.rel_tol}};
    put_optional(d, "expected_total", c.dissipation.expected_total);
    st["dissipation"] = d;
  }
  if (c.structure.enabled) {
    json d = {{"radii_cells", c.structure.radii_cells},
              {"trace_x", c.structure.trace_x},
              {"trace_radii_cells", c.structure.trace_radii_cells}};
    put_optional(d, "threshold", c.structure.threshold);
    put_optional(d, "max_flagged", c.structure.max_flagged);
    st["structure"] = d;
  }
  if (c.degiorgi.enabled) {
    json d = {{"K", c.degiorgi.K}};
    put_optional(d, "U", c.degiorgi.U);
    st["degiorgi"] = d;
  }
  if (c.characteristics.enabled) {
    json d = {{"x0", c.characteristics.x0}, {"k", c.characteristics.k}};
    put_optional(d, "v0", c.characteristics.v0);
    st["characteristics"] = d;
  }
  if (c.decay.enabled) {
    json d = {{"n_samples", c.decay.n_samples}, {"time_origin", c.decay.time_origin}, {"gamma_tol", c.decay.gamma_tol}};
    put_optional(d, "t_min", c.decay.t_min);
    put_optional(d, "t_max", c.decay.t_max);
    put_optional(d, "expected_gamma", c.decay.expected_gamma);
    st["decay"] = d;
  }
  j["stages"] = st;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

struct RunState {
  fs::path dir;
  json manifest;
  std::vector<std::string> files;
  RunResult result;

  void check(const std::string& stage, const std::string& name, double value, double limit, bool passed) {
    manifest["checks"].push_back({{"stage", stage}, {"name", name}, {"value", value}, {"limit", limit}, {"passed", passed}});
    ++result.checks;
    if (!passed) {
      ++result.failed_checks;
      result.ok = false;
    }
  }
  void file(const std::string& rel) { files.push_back(rel); }
  void stage(const std::string& name, const json& summary) {
    manifest["stages"][name] = {{"status", "ok"}, {"summary", summary}};
  }
  void failed(const std::string& name, const std::string& what) {
    manifest["stages"][name] = {{"status", "error"}, {"error", what}};
    result.errors.push_back(name + ": " + what);
    result.ok = false;
  }
  void skipped(const std::string& name, const std::string& why) {
    manifest["stages"][name] = {{"status", "skipped"}, {"reason", why}};
  }
};

template <class F>
bool run_stage(RunState& st, const std::string& name, F&& body) {
  try {
    body();
    return true;
  } catch (const std::exception& e) {
    st.failed(name, e.what());
    return false;
  }
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2); }

RunResult run_experiment(const ExperimentConfig& config, const fs::path& dir_in) {
  config.validate();
  RunState st;
  st.dir = dir_in.empty() ? fs::path(config.output_dir) : dir_in;
  fs::create_directories(st.dir);
  st.result.dir = st.dir;
  const json cj = config_json(config);
  st.manifest["name"] = config.name;
  st.manifest["version"] = kVersion;
  st.manifest["config"] = cj;
  st.manifest["config_sha256"] = sha256_hex(cj.dump());
  st.manifest["checks"] = json::array();
  st.manifest["stages"] = json::object();

  const FluxSpec flux = make_flux(config.flux);
  const Grid grid = config.grid();
  const ScalarField u0 = make_initial_condition(config.ic, grid);

  std::vector<double> snaps = config.snapshots;
  if (config.characteristics.enabled) {
    const double T = config.t_end;
    for (int j = 0; j < config.characteristics.k; ++j)
      snaps.push_back(u0.time() + (T - u0.time()) * j / config.characteristics.k);
  }
  std::sort(snaps.begin(), snaps.end());

  Trajectory traj;
  bool have_traj = run_stage(st, "solve", [&] {
    traj = solve(u0, flux, config.t_end, snaps, config.solver);
    write_trajectory(st.dir / "trajectory.bin", traj);
    st.file("trajectory.bin");
    write_frame_csv(st.dir / "final_frame.csv", traj.frames.back());
    st.file("final_frame.csv");
    std::vector<std::vector<double>> rows;
    for (const auto& f : traj.frames) rows.push_back({f.time(), f.min(), f.max(), f.integral()});
    write_csv(st.dir / "solve.csv", {"t", "min", "max", "mass"}, rows);
    st.file("solve.csv");
    double lo = u0.min(), hi = u0.max();
    double worst = 0.0;
    for (const auto& f : traj.frames) worst = std::max({worst, lo - f.min(), f.max() - hi});
    st.stage("solve", {{"frames", traj.frames.size()},
                       {"t_start", traj.frames.front().time()},
                       {"t_end", traj.frames.back().time()},
                       {"mass_start", traj.frames.front().integral()},
                       {"mass_end", traj.frames.back().integral()}});
    st.check("solve", "maximum principle overshoot", worst, 1e-12 * std::max(1.0, std::abs(hi)),
             worst <= 1e-12 * std::max(1.0, std::abs(hi)));
  });

  DissipationMeasure mu;
  bool have_mu = false;
  if (config.dissipation.enabled) {
    if (!have_traj) {
      st.skipped("dissipation", "solve failed");
    } else {
      have_mu = run_stage(st, "dissipation", [&] {
        double lo = traj.frames.front().min(), hi = traj.frames.front().max();
        for (const auto& f : traj.frames) {
          lo = std::min(lo, f.min());
          hi = std::max(hi, f.max());
        }
        const auto levels = default_levels(lo, hi, config.dissipation.levels);
        mu = entropy_dissipation(traj, flux, levels);
        std::vector<std::vector<double>> rows;
        rows.reserve(mu.entries.size());
        for (const auto& e : mu.entries)
          rows.push_back({static_cast<double>(e.t_index), static_cast<double>(e.cell), static_cast<double>(e.level), e.mass});
        write_csv(st.dir / "mu.csv", {"t_index", "cell_index", "level_index", "mass"}, rows);
        st.file("mu.csv");
        const auto marg = mu.level_marginal();
        rows.clear();
        for (std::size_t l = 0; l < marg.size(); ++l) rows.push_back({levels[l], marg[l]});
        write_csv(st.dir / "mu_levels.csv", {"level", "mass"}, rows);
        st.file("mu_levels.csv");
        const double window = traj.frames.back().time() - traj.frames.front().time();
        st.stage("dissipation", {{"total", mu.total},
                                 {"total_per_unit_time", mu.total / window},
                                 {"clipped_total", mu.clipped_total},
                                 {"sink_total", mu.sink_total},
                                 {"entries", mu.entries.size()},
                                 {"levels", levels.size()}});
        if (config.dissipation.expected_total) {
          const double e = *config.dissipation.expected_total;
          const double rel = std::abs(mu.total / window - e) / std::abs(e);
          st.check("dissipation", "total per unit time relative error", rel, config.dissipation.rel_tol,
                   rel <= config.dissipation.rel_tol);
        }
      });
    }
  }

  if (config.structure.enabled) {
    if (!have_mu) {
      st.skipped("structure", "dissipation unavailable");
    } else {
      run_stage(st, "structure", [&] {
        const double h = grid.max_spacing();
        std::vector<double> radii;
        for (double r : config.structure.radii_cells) radii.push_back(r * h);
        double lo = u0.min(), hi = u0.max();
        const double thr = config.structure.threshold ? *config.structure.threshold : default_jump_threshold(lo, hi);
        const auto mask = jump_set(mu, radii, thr);
        const std::size_t S = mu.spatial_cells();
        std::vector<std::vector<double>> rows;
        for (auto k : mask.flagged_cells()) rows.push_back({static_cast<double>(k / S), static_cast<double>(k % S)});
        write_csv(st.dir / "mask.csv", {"t_index", "cell_index"}, rows);
        st.file("mask.csv");
        json mj = {{"threshold", thr},
                   {"radii", radii},
                   {"flagged", mask.count()},
                   {"geometry", {{"shape", mask.geometry.shape},
                                 {"origin", mask.geometry.origin},
                                 {"spacing", mask.geometry.spacing}}}};
        json summary = {{"threshold", thr}, {"flagged", mask.count()}, {"grid_floor", grid_floor(u0)}};
        if (!config.structure.trace_x.empty()) {
          std::vector<double> tr;
          for (double r : config.structure.trace_radii_cells) tr.push_back(r * h);
          const auto fit = blowup_trace(traj.frames.back(), config.structure.trace_x, tr);
          json fj = {{"center", fit.center},          {"normal", fit.normal},
                     {"u_plus", fit.u_plus},          {"u_minus", fit.u_minus},
                     {"radii", fit.radii},            {"residual", fit.residual},
                     {"u_plus_by_radius", fit.u_plus_by_radius},
                     {"u_minus_by_radius", fit.u_minus_by_radius},
                     {"cone_plus_deviation", fit.cone_plus_deviation},
                     {"cone_minus_deviation", fit.cone_minus_deviation},
                     {"single_shock", fit.single_shock}};
          std::ofstream(st.dir / "trace.json") << fj.dump(2) << '\n';
          st.file("trace.json");
          summary["trace"] = {{"u_plus", fit.u_plus}, {"u_minus", fit.u_minus}, {"single_shock", fit.single_shock}};
        }
        std::ofstream(st.dir / "mask.json") << mj.dump(2) << '\n';
        st.file("mask.json");
        st.stage("structure", summary);
        if (config.structure.max_flagged)
          st.check("structure", "flagged cells", static_cast<double>(mask.count()),
                   static_cast<double>(*config.structure.max_flagged), mask.count() <= *config.structure.max_flagged);
      });
    }
  }

  if (config.degiorgi.enabled) {
    if (!have_traj) {
      st.skipped("degiorgi", "solve failed");
    } else {
      run_stage(st, "degiorgi", [&] {
        const ScalarField& f = traj.frames.back();
        const BallFrame frame = inscribed_frame(f.grid());
        const auto norms = degiorgi_norms(f, frame);
        double U = config.degiorgi.U ? *config.degiorgi.U : 2.0 * norms.linf;
        if (!(U > 0.0)) U = 1.0;
        const auto ladder = truncation_ladder(f, U, config.degiorgi.K, frame);
        std::vector<std::vector<double>> rows;
        bool monotone = true;
        for (std::size_t k = 0; k < ladder.A.size(); ++k) {
          rows.push_back({static_cast<double>(k), ladder.levels[k], ladder.radii[k], ladder.A[k]});
          if (k > 0 && ladder.A[k] > ladder.A[k - 1]) monotone = false;
        }
        write_csv(st.dir / "ladder.csv", {"k", "ell_k", "r_k", "A_k"}, rows);
        st.file("ladder.csv");
        const double floor = grid_floor(u0);
        st.stage("degiorgi", {{"U", U}, {"K", config.degiorgi.K}, {"A_K", ladder.A.back()}, {"grid_floor", floor}});
        st.check("degiorgi", "A_k nonincreasing", monotone ? 0.0 : 1.0, 0.0, monotone);
        st.check("degiorgi", "A_K below grid floor", ladder.A.back(), floor, ladder.A.back() <= floor);
      });
    }
  }

  if (config.characteristics.enabled) {
    if (!have_traj) {
      st.skipped("characteristics", "solve failed");
    } else {
      run_stage(st, "characteristics", [&] {
        const auto& x0 = config.characteristics.x0;
        // A uniform step does not land on the polygon times; re-solve with clipped steps.
        Trajectory clipped;
        if (config.solver.uniform_dt) {
          SolverConfig sc = config.solver;
          sc.uniform_dt = false;
          sc.record_every_step = false;
          std::vector<double> times;
          for (int j = 0; j < config.characteristics.k; ++j)
            times.push_back(u0.time() + (config.t_end - u0.time()) * j / config.characteristics.k);
          clipped = solve(u0, flux, config.t_end, times, sc);
        }
        const Trajectory& ct = config.solver.uniform_dt ? clipped : traj;
        const double v0 = config.characteristics.v0 ? *config.characteristics.v0 : ct.frames.back().interpolate(x0);
        const auto poly = backward_characteristic(ct, flux, x0, v0, config.characteristics.k);
        std::vector<std::string> header{"t"};
        for (std::size_t a = 0; a < x0.size(); ++a) header.push_back("x" + std::to_string(a));
        header.push_back("value_lo");
        header.push_back("value_hi");
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j < poly.points.size(); ++j) {
          std::vector<double> r{poly.times[j]};
          for (double x : poly.points[j]) r.push_back(x);
          r.push_back(j ? poly.segment_lo[j - 1] : poly.segment_lo.front());
          r.push_back(j ? poly.segment_hi[j - 1] : poly.segment_hi.front());
          rows.push_back(r);
        }
        write_csv(st.dir / "polygon.csv", header, rows);
        st.file("polygon.csv");
        const double dt = (poly.times.back() - poly.times.front()) / config.characteristics.k;
        const double M = flux.max_spatial_speed(flux.interval.lo, flux.interval.hi);
        const double limit = M * dt + 3.0 * grid.max_spacing();
        st.stage("characteristics", {{"v0", v0}, {"chord_deviation", poly.chord_deviation()}, {"max_speed", poly.max_speed()}});
        st.check("characteristics", "chord deviation", poly.chord_deviation(), limit, poly.chord_deviation() <= limit);
      });
    }
  }

  if (config.decay.enabled) {
    run_stage(st, "decay", [&] {
      const auto series = decay_experiment(flux, u0, config.t_end, config.decay.n_samples, config.decay.time_origin,
                                           config.solver);
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < series.times.size(); ++i) rows.push_back({series.times[i], series.sup_norms[i]});
      write_csv(st.dir / "decay.csv", {"t", "sup_norm"}, rows);
      st.file("decay.csv");
      const double t_min = config.decay.t_min ? *config.decay.t_min
                                              : config.decay.time_origin + (config.t_end - config.decay.time_origin) / 8.0;
      const auto fit = fit_decay_exponent(series, t_min, config.decay.t_max.value_or(-1.0));
      st.stage("decay", {{"gamma_hat", fit.gamma_hat},
                         {"C_hat", fit.C_hat},
                         {"samples", fit.samples},
                         {"l1_norm", series.l1_norm},
                         {"linf_norm", series.linf_norm}});
      if (config.decay.expected_gamma) {
        const double err = std::abs(fit.gamma_hat - *config.decay.expected_gamma);
        st.check("decay", "fitted gamma error", err, config.decay.gamma_tol, err <= config.decay.gamma_tol);
      }
    });
  }

  json files = json::array();
  std::sort(st.files.begin(), st.files.end());
  for (const auto& f : st.files)
    files.push_back({{"path", f}, {"sha256", sha256_file(st.dir / f)}, {"bytes", fs::file_size(st.dir / f)}});
  st.manifest["files"] = files;
  st.manifest["ok"] = st.result.ok;
  std::ofstream(st.dir / "manifest.json") << st.manifest.dump(2) << '\n';
  return st.result;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  const fs::path dir(CONSLAW_PRESET_DIR);
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

fs::path preset_path(const std::string& name) {
  const fs::path p = fs::path(CONSLAW_PRESET_DIR) / (name + ".json");
  if (!fs::exists(p)) throw InputError("unknown preset '" + name + "'");
  return p;
}

}  // namespace conslaw
