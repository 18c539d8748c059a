// coulomb_lab: batch driver for the two-dimensional Coulomb gas toolkit.
//
// One subcommand per run. Results land in --out as CSV/JSON named
// <command>-<hash-of-effective-config>.<ext>, next to a manifest.json that
// echoes the full configuration, so any output directory can be re-derived
// from its manifest.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "coulomb/analysis.hpp"
#include "coulomb/energy.hpp"
#include "coulomb/io.hpp"
#include "coulomb/periodic.hpp"
#include "coulomb/sampler.hpp"
#include "coulomb/zfunc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace coulomb;

namespace {

constexpr const char* kVersion = "coulomb_lab 0.1.0";

struct Manifest {
  std::string command;
  json config;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void write(const std::string& out_dir) const {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["outputs"] = outputs;
    m["version"] = kVersion;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    io::write_json((fs::path(out_dir) / "manifest.json").string(), m);
  }
};

Potential parse_potential(const std::string& desc) {
  if (desc == "quadratic") return Potential::quadratic();
  if (desc == "quartic") return Potential::radial_polynomial({0.0, 1.0});
  if (desc.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    std::string rest = desc.substr(5);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      coeffs.push_back(std::stod(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return Potential::radial_polynomial(coeffs);
  }
  if (desc.rfind("grid:", 0) == 0) {
    const json j = io::read_json(desc.substr(5));
    const Eigen::ArrayXXd values =
        io::read_grid_binary(j.at("values").get<std::string>());
    return Potential::grid_sampled(
        values, {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()},
        j.at("spacing").get<double>());
  }
  throw InvalidParamsError("potential: expected quadratic, quartic, poly:a1,a2,... or grid:file.json");
}

EquilibriumMeasure solve_measure(const Potential& p, const std::string& method,
                                 double half_width, double cell) {
  if (method == "radial") return EquilibriumMeasure::solve_radial(p);
  if (method == "grid") {
    ObstacleGridOptions opt;
    opt.half_width = half_width;
    opt.cell = cell;
    return EquilibriumMeasure::solve_grid(p, opt);
  }
  throw InvalidParamsError("method: expected radial or grid");
}

Torus parse_lattice(const std::string& desc, Eigen::Index n_points = 1) {
  Torus t;
  if (desc == "triangular")
    t = Torus::triangular();
  else if (desc == "square")
    t = Torus::square();
  else if (desc.rfind("tau:", 0) == 0) {
    const std::string rest = desc.substr(4);
    const std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
      throw InvalidParamsError("lattice: tau:RE,IM");
    t = Torus::from_modular(std::stod(rest.substr(0, comma)),
                            std::stod(rest.substr(comma + 1)));
  } else {
    throw InvalidParamsError("lattice: expected triangular, square or tau:RE,IM");
  }
  if (n_points > 1) {
    // scale the unit cell to carry n points of a finer sublattice copy
    throw InvalidParamsError("lattice: only single-point cells are built in");
  }
  return t;
}

// Fill any unset CLI option from the config file; flags always win.
void merge_config(CLI::App* cmd, const json& cfg) {
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    std::string text = value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

std::string out_file(const std::string& out_dir, const std::string& stem,
                     const std::string& ext) {
  return (fs::path(out_dir) / (stem + "." + ext)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{kVersion};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed, echoed into the manifest");
  app.add_option("--threads", threads, "worker cap (default: COULOMB_LAB_THREADS or 1)");

  // equilibrium
  auto* cmd_eq = app.add_subcommand("equilibrium", "construct the equilibrium measure");
  cmd_eq->fallthrough();
  std::string eq_potential = "quadratic", eq_method = "radial";
  double eq_half_width = 2.0, eq_cell = 1.0 / 64;
  cmd_eq->add_option("--potential", eq_potential);
  cmd_eq->add_option("--method", eq_method);
  cmd_eq->add_option("--half-width", eq_half_width);
  cmd_eq->add_option("--cell", eq_cell);

  // energy
  auto* cmd_en = app.add_subcommand("energy", "splitting report for a configuration");
  cmd_en->fallthrough();
  std::string en_input, en_potential = "quadratic";
  cmd_en->add_option("--input", en_input)->required();
  cmd_en->add_option("--potential", en_potential);

  // fekete
  auto* cmd_fk = app.add_subcommand("fekete", "minimize the Hamiltonian");
  cmd_fk->fallthrough();
  int fk_n = 10, fk_multistarts = 1, fk_max_iters = 20000;
  double fk_grad_tol = 0.0;
  std::string fk_potential = "quadratic";
  cmd_fk->add_option("--n", fk_n);
  cmd_fk->add_option("--potential", fk_potential);
  cmd_fk->add_option("--multistarts", fk_multistarts);
  cmd_fk->add_option("--max-iters", fk_max_iters);
  cmd_fk->add_option("--grad-tol", fk_grad_tol);

  // sample
  auto* cmd_sm = app.add_subcommand("sample", "Metropolis chain for the Gibbs law");
  cmd_sm->fallthrough();
  int sm_n = 50, sm_sweeps = 1000, sm_burn = 200, sm_thin = 1;
  double sm_beta = 2.0, sm_sigma = 0.0;
  std::string sm_potential = "quadratic";
  cmd_sm->add_option("--n", sm_n);
  cmd_sm->add_option("--beta", sm_beta);
  cmd_sm->add_option("--sweeps", sm_sweeps);
  cmd_sm->add_option("--burn-in", sm_burn);
  cmd_sm->add_option("--thin", sm_thin);
  cmd_sm->add_option("--sigma", sm_sigma);
  cmd_sm->add_option("--potential", sm_potential);

  // ginibre
  auto* cmd_gn = app.add_subcommand("ginibre", "exact beta = 2 eigenvalue draw");
  cmd_gn->fallthrough();
  int gn_n = 100;
  cmd_gn->add_option("--n", gn_n);

  // wper
  auto* cmd_wp = app.add_subcommand("wper", "renormalized energy of a periodic lattice");
  cmd_wp->fallthrough();
  std::string wp_lattice = "triangular";
  double wp_tol = 1e-8;
  cmd_wp->add_option("--lattice", wp_lattice);
  cmd_wp->add_option("--tol", wp_tol);

  // scan-lattice
  auto* cmd_sc = app.add_subcommand("scan-lattice", "W over the modular domain");
  cmd_sc->fallthrough();
  int sc_nx = 41, sc_ny = 41;
  double sc_tol = 1e-8;
  cmd_sc->add_option("--grid-nx", sc_nx);
  cmd_sc->add_option("--grid-ny", sc_ny);
  cmd_sc->add_option("--tol", sc_tol);

  // discrepancy
  auto* cmd_ds = app.add_subcommand("discrepancy", "D(x', R) field over a window");
  cmd_ds->fallthrough();
  std::string ds_input, ds_potential = "quadratic";
  double ds_R = 2.0, ds_step = 0.5;
  std::vector<double> ds_window{-2.0, -2.0, 2.0, 2.0};
  cmd_ds->add_option("--input", ds_input)->required();
  cmd_ds->add_option("--potential", ds_potential);
  cmd_ds->add_option("--R", ds_R);
  cmd_ds->add_option("--step", ds_step);
  cmd_ds->add_option("--window", ds_window)->expected(4);

  // zcheck
  auto* cmd_zc = app.add_subcommand("zcheck", "Ginibre partition function sweep");
  cmd_zc->fallthrough();
  int zc_n_max = 2000;
  cmd_zc->add_option("--n-max", zc_n_max);

  json file_cfg;
  try {
    // pre-scan for --config so its keys can stand in for unset flags
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") file_cfg = io::read_json(argv[i + 1]);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.get_name() << ": " << e.what() << "\n";
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    merge_config(cmd, file_cfg);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  }

  if (threads > 0) set_num_threads(threads);

  try {
    fs::create_directories(out_dir);
    Manifest manifest;
    manifest.command = cmd->get_name();
    json& cfg = manifest.config;
    cfg["command"] = cmd->get_name();
    cfg["seed"] = seed;
    cfg["threads"] = num_threads();

    if (cmd == cmd_eq) {
      cfg["potential"] = eq_potential;
      cfg["method"] = eq_method;
      if (eq_method == "grid") {
        cfg["half_width"] = eq_half_width;
        cfg["cell"] = eq_cell;
      }
      const auto em = solve_measure(parse_potential(eq_potential), eq_method,
                                    eq_half_width, eq_cell);
      const std::string stem = "equilibrium-" + io::config_hash(cfg);
      io::save_equilibrium(em, out_file(out_dir, stem, "json"));
      manifest.outputs.push_back(stem + ".json");
    } else if (cmd == cmd_en) {
      cfg["input"] = en_input;
      cfg["potential"] = en_potential;
      const Potential p = parse_potential(en_potential);
      const auto em = EquilibriumMeasure::solve_radial(p);
      const Configuration points = io::load_configuration_csv(en_input);
      const auto rep = splitting_report(points, em);
      const std::string stem = "energy-" + io::config_hash(cfg);
      io::write_json(out_file(out_dir, stem, "json"), io::energy_report_to_json(rep));
      manifest.outputs.push_back(stem + ".json");
    } else if (cmd == cmd_fk) {
      cfg["n"] = fk_n;
      cfg["potential"] = fk_potential;
      cfg["multistarts"] = fk_multistarts;
      cfg["max_iters"] = fk_max_iters;
      cfg["grad_tol"] = fk_grad_tol;
      const auto em = EquilibriumMeasure::solve_radial(parse_potential(fk_potential));
      FeketeOptions opts;
      opts.max_iters = fk_max_iters;
      opts.grad_tol = fk_grad_tol;
      opts.multistarts = fk_multistarts;
      opts.seed = seed;
      Rng rng(seed);
      const Configuration start = em.sample_configuration(fk_n, rng);
      const auto res = minimize_fekete(start, em, opts);
      const std::string stem = "fekete-" + io::config_hash(cfg);
      io::save_configuration_csv(out_file(out_dir, stem, "csv"), res.points);
      json j;
      j["w"] = res.w;
      j["grad_norm_inf"] = res.grad_norm_inf;
      j["iterations"] = res.iterations;
      j["converged"] = (res.status == FeketeStatus::Converged);
      j["best_start"] = res.best_start;
      io::write_json(out_file(out_dir, stem, "json"), j);
      manifest.outputs.push_back(stem + ".csv");
      manifest.outputs.push_back(stem + ".json");
    } else if (cmd == cmd_sm) {
      cfg["n"] = sm_n;
      cfg["beta"] = sm_beta;
      cfg["sweeps"] = sm_sweeps;
      cfg["burn_in"] = sm_burn;
      cfg["thin"] = sm_thin;
      cfg["sigma"] = sm_sigma;
      cfg["potential"] = sm_potential;
      const auto em = EquilibriumMeasure::solve_radial(parse_potential(sm_potential));
      McmcParams params;
      params.beta = sm_beta;
      params.n_particles = sm_n;
      params.n_sweeps = sm_sweeps;
      params.burn_in_sweeps = sm_burn;
      params.thinning = sm_thin;
      params.proposal_sigma = sm_sigma;
      params.seed = seed;
      const auto run = mcmc_chain(em, params);
      const std::string stem = "samples-" + io::config_hash(cfg);
      std::vector<std::vector<double>> rows;
      for (std::size_t s = 0; s < run.samples.size(); ++s)
        for (Eigen::Index i = 0; i < run.samples[s].rows(); ++i)
          rows.push_back({static_cast<double>(s), run.samples[s](i, 0),
                          run.samples[s](i, 1)});
      io::write_csv(out_file(out_dir, stem, "csv"), {"sample_index", "x", "y"}, rows);
      json j;
      j["acceptance_rate"] = run.stats.acceptance_rate;
      j["autocorrelation_time"] = run.stats.autocorrelation_time;
      j["act_degenerate"] = run.stats.act_degenerate;
      j["max_resync_drift"] = run.stats.max_resync_drift;
      j["kept_samples"] = run.samples.size();
      io::write_json(out_file(out_dir, "chain-" + io::config_hash(cfg), "json"), j);
      manifest.outputs.push_back(stem + ".csv");
      manifest.outputs.push_back("chain-" + io::config_hash(cfg) + ".json");
    } else if (cmd == cmd_gn) {
      cfg["n"] = gn_n;
      const Configuration pts = ginibre_exact(gn_n, seed);
      const std::string stem = "ginibre-" + io::config_hash(cfg);
      io::save_configuration_csv(out_file(out_dir, stem, "csv"), pts);
      manifest.outputs.push_back(stem + ".csv");
    } else if (cmd == cmd_wp) {
      cfg["lattice"] = wp_lattice;
      cfg["tol"] = wp_tol;
      const Torus t = parse_lattice(wp_lattice);
      const auto res = w_periodic(t, wp_tol);
      json j;
      j["basis"] = {{t.u.x(), t.u.y()}, {t.v.x(), t.v.y()}};
      j["n"] = t.points.rows();
      j["W"] = res.W;
      j["err"] = res.err;
      j["alpha"] = res.alpha;
      j["radii"] = {{"real", res.r_cut}, {"reciprocal", res.k_cut}};
      const std::string stem = "wper-" + io::config_hash(cfg);
      io::write_json(out_file(out_dir, stem, "json"), j);
      manifest.outputs.push_back(stem + ".json");
    } else if (cmd == cmd_sc) {
      cfg["grid_nx"] = sc_nx;
      cfg["grid_ny"] = sc_ny;
      cfg["tol"] = sc_tol;
      const auto rows = lattice_scan(sc_nx, sc_ny, sc_tol);
      const std::size_t best = scan_argmin(rows);
      std::vector<std::vector<double>> csv;
      for (const auto& r : rows) csv.push_back({r.tau_re, r.tau_im, r.W, r.err});
      const std::string stem = "scan-" + io::config_hash(cfg);
      io::write_csv(out_file(out_dir, stem, "csv"), {"tau_re", "tau_im", "W", "err"}, csv);
      json j;
      j["argmin_tau_re"] = rows[best].tau_re;
      j["argmin_tau_im"] = rows[best].tau_im;
      j["argmin_W"] = rows[best].W;
      io::write_json(out_file(out_dir, stem, "json"), j);
      manifest.outputs.push_back(stem + ".csv");
      manifest.outputs.push_back(stem + ".json");
    } else if (cmd == cmd_ds) {
      cfg["input"] = ds_input;
      cfg["potential"] = ds_potential;
      cfg["R"] = ds_R;
      cfg["step"] = ds_step;
      cfg["window"] = ds_window;
      const auto em = EquilibriumMeasure::solve_radial(parse_potential(ds_potential));
      const Configuration points = io::load_configuration_csv(ds_input);
      Rect window{{ds_window[0], ds_window[1]}, {ds_window[2], ds_window[3]}};
      const auto field = discrepancy_field(points, em, window, ds_R, ds_step);
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < field.centers.size(); ++k)
        rows.push_back({field.centers[k].x(), field.centers[k].y(), field.values[k]});
      const std::string stem = "discrepancy-" + io::config_hash(cfg);
      io::write_csv(out_file(out_dir, stem, "csv"), {"x", "y", "D"}, rows);
      manifest.outputs.push_back(stem + ".csv");
    } else if (cmd == cmd_zc) {
      cfg["n_max"] = zc_n_max;
      const auto rows = partition_sweep(zc_n_max);
      std::vector<std::vector<double>> csv;
      for (const auto& r : rows)
        csv.push_back({static_cast<double>(r.n), r.logZ_exact, r.logZ_asymptotic,
                       r.residual,
                       r.n > 1 ? r.residual / std::log(static_cast<double>(r.n)) : 0.0});
      const std::string stem = "zcheck-" + io::config_hash(cfg);
      io::write_csv(out_file(out_dir, stem, "csv"),
                    {"n", "logZ_exact", "logZ_asymptotic", "residual",
                     "residual_over_logn"},
                    csv);
      manifest.outputs.push_back(stem + ".csv");
    }

    manifest.write(out_dir);
  } catch (const InvalidParamsError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
