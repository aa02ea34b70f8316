// Command-line front end: solitary-wave construction, linearization scans,
// rescaled-kernel analysis, and lattice simulation behind one reproducible
// interface.  Every artifact carries a manifest hash of the resolved
// configuration; identical flags reproduce byte-identical files.

#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpuwave/grid.hpp"
#include "fpuwave/lattice.hpp"
#include "fpuwave/limit_ode.hpp"
#include "fpuwave/potential.hpp"
#include "fpuwave/rescaled.hpp"
#include "fpuwave/run_io.hpp"
#include "fpuwave/scan.hpp"
#include "fpuwave/spectral.hpp"
#include "fpuwave/wave.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fpuwave;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonOpts {
  std::string out_root;  // --out-root flag; empty = env/cwd policy
};

Manifest base_manifest(const std::string& command) {
  Manifest mf;
  mf.set("command", std::string(command));
  mf.set("version", std::string(kVersion));
  return mf;
}

std::string out_dir(const CommonOpts& common) {
  const std::string root = resolve_out_root(common.out_root);
  fs::create_directories(root);
  return root;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out.is_open()) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << j.dump(2) << '\n';
  if (!out.good()) throw std::runtime_error("write failed for " + path);
}

void announce(const std::string& path) { std::cout << path << '\n'; }

int grid_points_from_step(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("--h must be positive");
  const double k_real = 1.0 / (2.0 * h);
  const long k = std::lround(k_real);
  if (k < 32 || std::abs(k_real - static_cast<double>(k)) > 1e-6 * k_real) {
    throw std::invalid_argument("--h must equal 1/(2K) for an integer K >= 32");
  }
  return static_cast<int>(k);
}

json manifest_block(const Manifest& mf) {
  json j;
  j["hash"] = mf.hash();
  j["config"] = mf.entries;
  return j;
}

// ---------------------------------------------------------------- limit-ode

struct LimitOdeOpts {
  CommonOpts common;
  double m = 0.0;
  double xmax = 50.0;
  double step = 1e-3;
  std::string out;
};

void run_limit_ode(const LimitOdeOpts& o) {
  const LimitOde ode = solve_limit_ode(o.m, o.xmax, o.step);

  Manifest mf = base_manifest("limit-ode");
  mf.set("m", o.m);
  mf.set("xmax", o.xmax);
  mf.set("step", o.step);

  const std::string root = out_dir(o.common);
  const std::string name =
      o.out.empty() ? "limit_ode_m" + format_compact(o.m) : o.out;

  CsvTable table;
  table.manifest_hash = mf.hash();
  table.columns = {"xbar", "Sbar", "Sbar_prime"};
  table.rows.reserve(ode.s.size());
  for (std::size_t i = 0; i < ode.s.size(); ++i) {
    table.rows.push_back({static_cast<double>(i) * ode.step, ode.s[i], ode.sp[i]});
  }
  const std::string csv_path = root + "/" + name + ".csv";
  write_csv(csv_path, table);

  json j;
  j["m"] = ode.m;
  j["xbar_max"] = ode.xbar_max;
  j["step"] = ode.step;
  j["mu_bar"] = ode.mu_bar;
  j["kappa_bar"] = ode.kappa_bar;
  j["kappa_bar_limit"] = ode.kappa_bar_limit;
  j["energy_residual"] = ode.energy_residual;
  j["manifest"] = manifest_block(mf);
  const std::string json_path = root + "/" + name + ".json";
  write_json_file(json_path, j);

  announce(csv_path);
  announce(json_path);
}

// -------------------------------------------------------------------- solve

struct SolveOpts {
  CommonOpts common;
  double m = 2.0;
  double delta = 0.1;
  double X = 6.0;
  double h = 1.0 / 512.0;
  double tol = 1e-13;
  std::string out;
};

Manifest solve_manifest(const SolveOpts& o, const Grid& grid) {
  Manifest mf = base_manifest("solve");
  mf.set("m", o.m);
  mf.set("delta", o.delta);
  mf.set("X", grid.X);
  mf.set("h", grid.h());
  mf.set("tol", o.tol);
  return mf;
}

void write_wave_artifacts(const WaveSolution& w, const Manifest& mf,
                          const std::string& root, const std::string& name) {
  CsvTable table;
  table.manifest_hash = mf.hash();
  table.columns = {"x", "R", "V"};
  table.rows.reserve(w.R.size());
  for (std::size_t i = 0; i < w.R.size(); ++i) {
    table.rows.push_back({w.grid.node(static_cast<int>(i)), w.R[i], w.V[i]});
  }
  const std::string csv_path = root + "/" + name + ".csv";
  write_csv(csv_path, table);

  json j;
  j["m"] = w.m;
  j["delta"] = w.delta;
  j["sigma"] = w.sigma;
  j["eps"] = w.eps;
  j["mu"] = w.mu;
  j["p"] = w.p;
  j["H"] = w.H;
  j["residual"] = w.residual;
  j["iterations"] = w.iterations;
  j["grid"]["X"] = w.grid.X;
  j["grid"]["h"] = w.grid.h();
  j["grid"]["K"] = w.grid.K;
  j["manifest"] = manifest_block(mf);
  const std::string json_path = root + "/" + name + ".json";
  write_json_file(json_path, j);

  announce(csv_path);
  announce(json_path);
}

void run_solve(const SolveOpts& o) {
  const Grid grid = make_grid(o.X, grid_points_from_step(o.h));
  const WaveSolution w = solve_wave(PotentialParams(o.m), o.delta, grid, o.tol);
  const Manifest mf = solve_manifest(o, grid);
  const std::string name = o.out.empty()
                               ? "wave_m" + format_compact(o.m) + "_d" +
                                     format_compact(o.delta)
                               : o.out;
  write_wave_artifacts(w, mf, out_dir(o.common), name);
}

// -------------------------------------------------------------------- sweep

struct SweepOpts {
  CommonOpts common;
  double m = 2.0;
  std::vector<double> deltas = {0.2, 0.1, 0.05};
  double X = 6.0;
  double h = 1.0 / 512.0;
  std::string report;
};

void run_sweep(const SweepOpts& o) {
  if (o.deltas.empty()) {
    throw std::invalid_argument("--deltas must list at least one value");
  }
  std::vector<double> deltas = o.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<double>());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  const Grid grid = make_grid(o.X, grid_points_from_step(o.h));

  Manifest mf = base_manifest("sweep");
  mf.set("m", o.m);
  mf.set("X", grid.X);
  mf.set("h", grid.h());
  {
    std::string list;
    for (const double d : deltas) {
      if (!list.empty()) list += ',';
      list += format_full(d);
    }
    mf.set("deltas", list);
  }

  const LimitOde ode = solve_limit_ode(o.m, 500.0, 1e-3);
  const CollapsePair pair = solve_collapse_pair(ode);

  CsvTable table;
  table.manifest_hash = mf.hash();
  table.columns = {"delta",       "eps",
                   "mu",          "sigma",
                   "err_R_inf",   "err_V_inf",
                   "err_mu_scaled", "err_sigma_scaled",
                   "c_e",         "c_o",
                   "kernel_count", "sv_ratio"};

  std::vector<double> err_r, err_v, err_mu, err_sigma;
  for (const double delta : deltas) {
    const WaveSolution w = solve_wave(PotentialParams(o.m), delta, grid);
    const SweepRow row = sweep_row(w, ode);
    const double a = 0.5 * a_crit(std::sqrt(w.sigma));
    const KernelScanReport scan = kernel_scan(w, a);
    const RescaledKernel rk = rescale_and_fit(w, scan, ode, pair);
    const double sv_ratio =
        scan.singular_values[1] / scan.singular_values[0];
    table.rows.push_back({delta, row.eps, row.mu, row.sigma, row.err_R_inf,
                          row.err_V_inf, row.err_mu_scaled,
                          row.err_sigma_scaled, rk.c_e, rk.c_o,
                          static_cast<double>(scan.kernel_count), sv_ratio});
    err_r.push_back(row.err_R_inf);
    err_v.push_back(row.err_V_inf);
    err_mu.push_back(row.err_mu_scaled);
    err_sigma.push_back(row.err_sigma_scaled);
  }

  if (deltas.size() >= 2) {
    table.footers = {
        "# slope_err_R_inf=" + format_full(loglog_slope(deltas, err_r)),
        "# slope_err_V_inf=" + format_full(loglog_slope(deltas, err_v)),
        "# slope_err_mu_scaled=" + format_full(loglog_slope(deltas, err_mu)),
        "# slope_err_sigma_scaled=" +
            format_full(loglog_slope(deltas, err_sigma))};
  }

  const std::string root = out_dir(o.common);
  const std::string name =
      o.report.empty() ? "sweep_m" + format_compact(o.m) : o.report;
  const std::string csv_path = root + "/" + name + ".csv";
  write_csv(csv_path, table);
  announce(csv_path);
}

// ---------------------------------------------------------------- linearize

struct LinearizeOpts {
  CommonOpts common;
  double m = 2.0;
  double delta = 0.1;
  double X = 6.0;
  double h = 1.0 / 512.0;
  double a_abs = 0.0;
  bool a_abs_set = false;
  double a_frac = 0.5;
  double kmax = 6.283185307179586;
  int nk = 801;
  std::string out;
};

void run_linearize(const LinearizeOpts& o) {
  const Grid grid = make_grid(o.X, grid_points_from_step(o.h));
  const WaveSolution w = solve_wave(PotentialParams(o.m), o.delta, grid);
  const double c = std::sqrt(w.sigma);
  const double ac = a_crit(c);
  const double a = o.a_abs_set ? o.a_abs : o.a_frac * ac;

  Manifest mf = base_manifest("linearize");
  mf.set("m", o.m);
  mf.set("delta", o.delta);
  mf.set("X", grid.X);
  mf.set("h", grid.h());
  mf.set("a", a);
  mf.set("kmax", o.kmax);
  mf.set("nk", static_cast<long>(o.nk));

  const EssentialSpectrum es = essential_spectrum(c, a, o.kmax, o.nk);
  const KernelScanReport scan = kernel_scan(w, a);

  const std::string root = out_dir(o.common);
  const std::string name = o.out.empty()
                               ? "spectrum_m" + format_compact(o.m) + "_d" +
                                     format_compact(o.delta) + "_a" +
                                     format_compact(a)
                               : o.out;

  CsvTable table;
  table.manifest_hash = mf.hash();
  table.columns = {"k", "reP_plus", "imP_plus", "reP_minus", "imP_minus"};
  table.rows.reserve(es.k.size());
  for (std::size_t i = 0; i < es.k.size(); ++i) {
    table.rows.push_back(
        {es.k[i], es.re_plus[i], es.im_plus[i], es.re_minus[i], es.im_minus[i]});
  }
  const std::string csv_path = root + "/" + name + ".csv";
  write_csv(csv_path, table);

  json j;
  j["m"] = w.m;
  j["delta"] = w.delta;
  j["c"] = c;
  j["a"] = a;
  j["a_c"] = ac;
  j["b_star"] = spectral_margin(c, a);
  j["essential_spectrum_max_re"] = es.max_re;
  j["singular_values"] = scan.singular_values;
  j["kernel_count"] = scan.kernel_count;
  j["even_subspace_min_sv"] = scan.even_min_sv;
  j["odd_first_sv"] = scan.odd_first_sv;
  j["translation_correlation"] = scan.translation_correlation;
  j["zero_singular_value"] = scan.zero_singular_value;
  j["inconclusive"] = scan.inconclusive;
  j["manifest"] = manifest_block(mf);
  const std::string json_path = root + "/" + name + ".json";
  write_json_file(json_path, j);

  announce(csv_path);
  announce(json_path);
}

// ------------------------------------------------------------------ rescale

struct RescaleOpts {
  CommonOpts common;
  std::string wave_path;
  double a_frac = 0.5;
  std::string out;
};

WaveSolution load_wave(const std::string& given) {
  fs::path json_path(given);
  if (!fs::exists(json_path) && fs::exists(given + ".json")) {
    json_path = given + ".json";
  }
  if (!fs::exists(json_path)) {
    throw std::invalid_argument("--wave: no such file: " + given);
  }
  std::ifstream in(json_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("--wave: cannot parse " + json_path.string() +
                                ": " + e.what());
  }

  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  if (!fs::exists(csv_path)) {
    throw std::invalid_argument("--wave: missing companion table " +
                                csv_path.string());
  }
  const CsvTable table = read_csv(csv_path.string());
  if (table.columns != std::vector<std::string>{"x", "R", "V"}) {
    throw std::invalid_argument("--wave: " + csv_path.string() +
                                " is not a wave table (columns must be x,R,V)");
  }

  WaveSolution w;
  try {
    w.m = j.at("m").get<double>();
    w.delta = j.at("delta").get<double>();
    w.sigma = j.at("sigma").get<double>();
    w.eps = j.at("eps").get<double>();
    w.mu = j.at("mu").get<double>();
    w.p = j.at("p").get<double>();
    w.residual = j.at("residual").get<double>();
    w.grid = make_grid(j.at("grid").at("X").get<double>(),
                       j.at("grid").at("K").get<int>());
    if (j.at("manifest").at("hash").get<std::string>() != table.manifest_hash) {
      throw std::invalid_argument(
          "--wave: manifest hash differs between table and sidecar");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument("--wave: sidecar missing fields: " +
                                std::string(e.what()));
  }
  if (static_cast<int>(table.rows.size()) != w.grid.size()) {
    throw std::invalid_argument("--wave: table size does not match the grid");
  }
  w.R.resize(table.rows.size());
  w.V.resize(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    w.R[i] = table.rows[i][1];
    w.V[i] = table.rows[i][2];
  }
  return w;
}

void run_rescale(const RescaleOpts& o) {
  const WaveSolution w = load_wave(o.wave_path);

  Manifest mf = base_manifest("rescale");
  mf.set("m", w.m);
  mf.set("delta", w.delta);
  mf.set("X", w.grid.X);
  mf.set("h", w.grid.h());
  mf.set("a_frac", o.a_frac);
  mf.set("wave", o.wave_path);

  const double a = o.a_frac * a_crit(std::sqrt(w.sigma));
  const KernelScanReport scan = kernel_scan(w, a);
  const LimitOde ode = solve_limit_ode(w.m, 500.0, 1e-3);
  const CollapsePair pair = solve_collapse_pair(ode);
  const RescaledKernel rk = rescale_and_fit(w, scan, ode, pair);

  const std::string root = out_dir(o.common);
  const std::string name = o.out.empty()
                               ? "rescaled_m" + format_compact(w.m) + "_d" +
                                     format_compact(w.delta)
                               : o.out;

  CsvTable table;
  table.manifest_hash = mf.hash();
  table.columns = {"xt", "St", "Te", "To", "Pt", "Zt"};
  table.rows.reserve(rk.xt.size());
  for (std::size_t i = 0; i < rk.xt.size(); ++i) {
    table.rows.push_back(
        {rk.xt[i], rk.St[i], rk.Te[i], rk.To[i], rk.Pt[i], rk.Zt[i]});
  }
  const std::string csv_path = root + "/" + name + ".csv";
  write_csv(csv_path, table);

  json j;
  j["m"] = w.m;
  j["delta"] = rk.delta;
  j["lambda"] = rk.lambda;
  j["a"] = rk.a;
  j["b"] = rk.b;
  j["c_e"] = rk.c_e;
  j["c_o"] = rk.c_o;
  j["sup_residual"] = rk.sup_residual;
  j["fixed_point_residual"] = rk.fp_residual;
  j["weighted_int0"] = rk.int0;
  j["weighted_int1"] = rk.int1;
  j["z_sup"] = rk.z_sup;
  j["norm_check"] = rk.norm_check;
  j["kernel_count"] = scan.kernel_count;
  j["manifest"] = manifest_block(mf);
  const std::string json_path = root + "/" + name + ".json";
  write_json_file(json_path, j);

  announce(csv_path);
  announce(json_path);
}

// ----------------------------------------------------------------- simulate

struct SimulateOpts {
  CommonOpts common;
  double m = 2.0;
  double delta = 0.1;
  double X = 6.0;
  double h = 1.0 / 512.0;
  int J = 48;
  int center = 16;
  double transits = 5.0;
  double dt = 0.0;  // 0 = default_time_step(wave)
  std::string out;
};

void write_snapshot(const std::string& path, const LatticeState& s,
                    const std::string& hash) {
  CsvTable table;
  table.manifest_hash = hash;
  table.columns = {"j", "r", "v"};
  table.rows.reserve(s.u.size());
  for (int jdx = 0; jdx < s.J; ++jdx) {
    const double r = jdx < s.bonds() ? s.bond(jdx) : 0.0;
    table.rows.push_back({static_cast<double>(jdx), r, s.v[jdx]});
  }
  write_csv(path, table);
  announce(path);
}

void run_simulate(const SimulateOpts& o) {
  const Grid grid = make_grid(o.X, grid_points_from_step(o.h));
  const WaveSolution w = solve_wave(PotentialParams(o.m), o.delta, grid);
  const double speed = std::sqrt(w.sigma);
  const double T = o.transits / speed;
  const double dt = o.dt > 0.0 ? o.dt : default_time_step(w);

  Manifest mf = base_manifest("simulate");
  mf.set("m", o.m);
  mf.set("delta", o.delta);
  mf.set("X", grid.X);
  mf.set("h", grid.h());
  mf.set("J", static_cast<long>(o.J));
  mf.set("center", static_cast<long>(o.center));
  mf.set("T_transits", o.transits);
  mf.set("dt", dt);

  const std::string root = out_dir(o.common);
  const std::string name = o.out.empty()
                               ? "lattice_m" + format_compact(o.m) + "_d" +
                                     format_compact(o.delta)
                               : o.out;

  LatticeState s = init_from_wave(w, o.J, o.center);
  write_snapshot(root + "/" + name + "_traj_t0.csv", s, mf.hash());

  const RunSummary sum = lattice_run(s, T, dt);
  write_snapshot(
      root + "/" + name + "_traj_t" + format_compact(sum.T) + ".csv", s,
      mf.hash());

  const ShapeFit fit = fit_shape(s, w, o.center, 0.0, o.transits + 5.0);

  json j;
  j["T"] = sum.T;
  j["dt"] = sum.dt;
  j["steps"] = sum.steps;
  j["energy_drift"] = sum.energy_drift;
  j["momentum_drift"] = sum.momentum_drift;
  j["max_bond_seen"] = sum.max_bond_seen;
  j["boundary_force_max"] = sum.boundary_force_max;
  j["shape_error"] = fit.error;
  j["fitted_speed"] = fit.shift / sum.T;
  j["sigma_ref"] = w.sigma;
  j["speed_ref"] = speed;
  j["manifest"] = manifest_block(mf);
  const std::string json_path = root + "/" + name + ".json";
  write_json_file(json_path, j);
  announce(json_path);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"Solitary waves of a singular-potential lattice: construction, "
               "linearization, rescaled analysis, and simulation"};
  app.require_subcommand(1);
  // the grid-step flag is spelled --h, so keep only the long help spelling
  app.set_help_flag("--help", "Print help");
  app.set_version_flag("--version", std::string("fpuwave ") + kVersion);
  app.set_config("--config", "",
                 "Plain-text key=value configuration; command-line flags "
                 "override config values");

  CommonOpts common;
  app.add_option("--out-root", common.out_root,
                 "Output root directory (overrides FPUWAVE_OUT_ROOT)");

  auto lo = std::make_shared<LimitOdeOpts>();
  CLI::App* c_lo = app.add_subcommand(
      "limit-ode", "Integrate the inner-limit profile ODE and its invariants");
  c_lo->set_help_flag("--help", "Print help");
  c_lo->fallthrough();
  c_lo->add_option("--m", lo->m, "singularity exponent (> 1)")->required();
  c_lo->add_option("--xmax", lo->xmax, "integration range")
      ->capture_default_str();
  c_lo->add_option("--step", lo->step, "integration step")
      ->capture_default_str();
  c_lo->add_option("--out", lo->out, "artifact base name");
  c_lo->callback([lo, &common] {
    lo->common = common;
    run_limit_ode(*lo);
  });

  auto so = std::make_shared<SolveOpts>();
  CLI::App* c_so =
      app.add_subcommand("solve", "Construct one solitary travelling wave");
  c_so->set_help_flag("--help", "Print help");
  c_so->fallthrough();
  c_so->add_option("--m", so->m, "singularity exponent")->capture_default_str();
  c_so->add_option("--delta", so->delta, "norm defect 1 - ||V||")
      ->capture_default_str();
  c_so->add_option("--X", so->X, "half-width of the profile domain")
      ->capture_default_str();
  c_so->add_option("--h", so->h, "grid step, must equal 1/(2K)")
      ->capture_default_str();
  c_so->add_option("--tol", so->tol, "fixed-point residual tolerance")
      ->capture_default_str();
  c_so->add_option("--out", so->out, "artifact base name");
  c_so->callback([so, &common] {
    so->common = common;
    run_solve(*so);
  });

  auto sw = std::make_shared<SweepOpts>();
  CLI::App* c_sw = app.add_subcommand(
      "sweep", "Convergence and uniqueness table over a list of deltas");
  c_sw->set_help_flag("--help", "Print help");
  c_sw->fallthrough();
  c_sw->add_option("--m", sw->m, "singularity exponent")->capture_default_str();
  c_sw->add_option("--deltas", sw->deltas, "comma-separated delta list")
      ->delimiter(',')
      ->capture_default_str();
  c_sw->add_option("--X", sw->X, "half-width of the profile domain")
      ->capture_default_str();
  c_sw->add_option("--h", sw->h, "grid step, must equal 1/(2K)")
      ->capture_default_str();
  c_sw->add_option("--report", sw->report, "report base name");
  c_sw->callback([sw, &common] {
    sw->common = common;
    run_sweep(*sw);
  });

  auto ln = std::make_shared<LinearizeOpts>();
  CLI::App* c_ln = app.add_subcommand(
      "linearize", "Weighted linearization: spectrum curves and kernel scan");
  c_ln->set_help_flag("--help", "Print help");
  c_ln->fallthrough();
  c_ln->add_option("--m", ln->m, "singularity exponent")->capture_default_str();
  c_ln->add_option("--delta", ln->delta, "norm defect")->capture_default_str();
  c_ln->add_option("--X", ln->X, "half-width of the profile domain")
      ->capture_default_str();
  c_ln->add_option("--h", ln->h, "grid step, must equal 1/(2K)")
      ->capture_default_str();
  CLI::Option* opt_a =
      c_ln->add_option("--a", ln->a_abs, "absolute exponential weight");
  CLI::Option* opt_af =
      c_ln->add_option("--a-frac", ln->a_frac,
                       "weight as a fraction of the critical value")
          ->capture_default_str();
  opt_a->excludes(opt_af);
  opt_af->excludes(opt_a);
  c_ln->add_option("--kmax", ln->kmax, "spectrum curve range in k")
      ->capture_default_str();
  c_ln->add_option("--nk", ln->nk, "spectrum curve samples")
      ->capture_default_str();
  c_ln->add_option("--out", ln->out, "artifact base name");
  c_ln->callback([ln, &common, opt_a] {
    ln->common = common;
    ln->a_abs_set = opt_a->count() > 0;
    run_linearize(*ln);
  });

  auto re = std::make_shared<RescaleOpts>();
  CLI::App* c_re = app.add_subcommand(
      "rescale", "Rescaled kernel analysis of a previously solved wave");
  c_re->set_help_flag("--help", "Print help");
  c_re->fallthrough();
  c_re->add_option("--wave", re->wave_path,
                   "path to a solve artifact (base name or .json)")
      ->required();
  c_re->add_option("--a-frac", re->a_frac,
                   "weight as a fraction of the critical value")
      ->capture_default_str();
  c_re->add_option("--out", re->out, "artifact base name");
  c_re->callback([re, &common] {
    re->common = common;
    run_rescale(*re);
  });

  auto si = std::make_shared<SimulateOpts>();
  CLI::App* c_si = app.add_subcommand(
      "simulate", "Velocity-Verlet run of the lattice seeded with a wave");
  c_si->set_help_flag("--help", "Print help");
  c_si->fallthrough();
  c_si->add_option("--m", si->m, "singularity exponent")->capture_default_str();
  c_si->add_option("--delta", si->delta, "norm defect")->capture_default_str();
  c_si->add_option("--X", si->X, "half-width of the profile domain")
      ->capture_default_str();
  c_si->add_option("--h", si->h, "grid step, must equal 1/(2K)")
      ->capture_default_str();
  c_si->add_option("--J", si->J, "number of lattice sites")
      ->capture_default_str();
  c_si->add_option("--center", si->center, "initial wave center site")
      ->capture_default_str();
  c_si->add_option("--T-transits", si->transits,
                   "horizon in units of 1/sqrt(sigma)")
      ->capture_default_str();
  c_si->add_option("--dt", si->dt,
                   "time step; 0 selects the default stable step");
  c_si->add_option("--out", si->out, "artifact base name");
  c_si->callback([si, &common] {
    si->common = common;
    run_simulate(*si);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
