// Command-line driver for the C-SBP verification studies.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csbp/discretization.hpp"
#include "csbp/errors.hpp"
#include "csbp/harness.hpp"
#include "csbp/riccati.hpp"
#include "csbp/sbp_core.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct StudyFlags {
  std::string config_path;
  std::optional<std::string> problem;
  std::optional<int> degree;
  std::optional<std::vector<int>> meshes;
  std::optional<double> sigma;
  std::optional<int> wavenumber;
  std::optional<double> fraction;
  std::optional<double> dt;
  std::optional<double> cfl;
  std::optional<int> time_samples;
  std::optional<int> envelope_samples;
  std::optional<std::string> output_dir;
  bool no_dt_halving = false;
};

void add_study_flags(CLI::App* cmd, StudyFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file (flags override its values)");
  cmd->add_option("--problem", f.problem, "burgers or symmetric2");
  cmd->add_option("--degree,-p", f.degree, "operator degree");
  cmd->add_option("--meshes", f.meshes, "element counts, strictly increasing")->delimiter(',');
  cmd->add_option("--sigma", f.sigma, "initial amplitude");
  cmd->add_option("--wavenumber", f.wavenumber, "initial wavenumber");
  cmd->add_option("--fraction", f.fraction, "final time as a fraction of the breaking time");
  cmd->add_option("--dt", f.dt, "fixed time step");
  cmd->add_option("--cfl", f.cfl, "CFL number when --dt is absent");
  cmd->add_option("--time-samples", f.time_samples, "samples for the bound-constant suprema");
  cmd->add_option("--envelope-samples", f.envelope_samples, "envelope comparison samples");
  cmd->add_option("--output-dir,-o", f.output_dir, "directory for report.csv and summary.json");
  cmd->add_flag("--no-dt-halving", f.no_dt_halving, "skip the dt-halving guard");
}

csbp::StudyConfig resolve(const StudyFlags& f, const std::string& study) {
  csbp::StudyConfig cfg = f.config_path.empty() ? csbp::StudyConfig{}
                                                : csbp::StudyConfig::from_file(f.config_path);
  cfg.study = study;
  if (f.problem) cfg.problem = *f.problem;
  if (f.degree) cfg.degree = *f.degree;
  if (f.meshes) cfg.meshes = *f.meshes;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.wavenumber) cfg.wavenumber = *f.wavenumber;
  if (f.fraction) cfg.final_time_fraction = *f.fraction;
  if (f.dt) cfg.dt = *f.dt;
  if (f.cfl) cfg.cfl = *f.cfl;
  if (f.time_samples) cfg.time_samples = *f.time_samples;
  if (f.envelope_samples) cfg.envelope_samples = *f.envelope_samples;
  if (f.output_dir) cfg.output_dir = *f.output_dir;
  if (f.no_dt_halving) cfg.dt_halving_check = false;
  return cfg;
}

json matrix_json(const csbp::DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const csbp::DenseVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

int operators_check(const std::vector<int>& degrees, const std::vector<int>& meshes) {
  bool ok = true;
  json out = json::array();
  for (int p : degrees) {
    const auto ref = csbp::build_reference_element(p);
    const csbp::DenseMatrix sbp = ref.q + ref.q.transpose() - csbp::DenseMatrix(ref.e.asDiagonal());
    const double sbp_res = sbp.cwiseAbs().maxCoeff() / ref.q.cwiseAbs().maxCoeff();
    bool p_ok = sbp_res <= 1e-13;
    json skew = json::object();
    for (int ne : meshes) {
      const auto gop = csbp::assemble_global(csbp::PeriodicMesh(0.0, 1.0, ne, p + 1), ref);
      const csbp::SparseMatrix qt = gop.q().transpose();
      const csbp::SparseMatrix sum = gop.q() + qt;
      double res = 0.0;
      for (int k = 0; k < sum.outerSize(); ++k) {
        for (csbp::SparseMatrix::InnerIterator it(sum, k); it; ++it) res = std::max(res, std::abs(it.value()));
      }
      skew[std::to_string(ne)] = res;
      p_ok = p_ok && res <= 1e-13;
    }
    ok = ok && p_ok;
    out.push_back({{"degree", p}, {"sbp_residual", sbp_res}, {"skew_residual", skew}, {"pass", p_ok}});
  }
  std::cout << json{{"operators", out}, {"pass", ok}}.dump(2) << "\n";
  return ok ? 0 : 1;
}

int operators_dump(int p, int ne) {
  const auto ref = csbp::build_reference_element(p);
  const auto gop = csbp::assemble_global(csbp::PeriodicMesh(0.0, 1.0, ne, p + 1), ref);
  json j = {{"degree", p},
            {"nodes", vector_json(ref.nodes)},
            {"weights", vector_json(ref.weights)},
            {"Q_ref", matrix_json(ref.q)},
            {"D_ref", matrix_json(ref.d)},
            {"elements", ne},
            {"H_global", vector_json(gop.h_diag())},
            {"Q_star", gop.q_star_norm()},
            {"w_min", gop.w_min()},
            {"w_max", gop.w_max()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

json riccati_json(const csbp::riccati::Coefficients& k) {
  const auto info = csbp::riccati::classify(k);
  return {{"case", csbp::riccati::case_name(info.kind)}, {"Delta", info.delta}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-SBP split-form discretizations and Riccati error envelopes"};
  app.require_subcommand(1);

  auto* ops = app.add_subcommand("operators", "SBP operator checks and dumps");
  ops->require_subcommand(1);
  std::vector<int> check_degrees{1, 2, 3, 4};
  std::vector<int> check_meshes{2, 4, 8, 16, 32, 64, 128};
  auto* ops_check = ops->add_subcommand("check", "verify SBP identities and global skew-symmetry");
  ops_check->add_option("--degrees", check_degrees)->delimiter(',');
  ops_check->add_option("--meshes", check_meshes)->delimiter(',');
  int dump_degree = 2, dump_elements = 4;
  auto* ops_dump = ops->add_subcommand("dump", "print reference and assembled operators as JSON");
  ops_dump->add_option("--degree,-p", dump_degree);
  ops_dump->add_option("--elements", dump_elements);

  StudyFlags sim_flags, conv_flags, scale_flags;
  std::string trajectory_path;
  auto* sim = app.add_subcommand("simulate", "integrate on the first mesh and report energy drift");
  add_study_flags(sim, sim_flags);
  sim->add_option("--trajectory", trajectory_path, "CSV of (t, energy) per step");
  auto* conv = app.add_subcommand("converge", "convergence and envelope study");
  add_study_flags(conv, conv_flags);
  auto* scale = app.add_subcommand("scaling", "mesh scaling of the Riccati coefficients");
  add_study_flags(scale, scale_flags);

  auto* ric = app.add_subcommand("riccati", "constant-coefficient Riccati envelope");
  ric->require_subcommand(1);
  csbp::riccati::Coefficients k;
  double t = 0.0;
  auto* solve = ric->add_subcommand("solve", "evaluate y(t)");
  solve->add_option("--a", k.a)->required();
  solve->add_option("--b", k.b)->required();
  solve->add_option("--c", k.c)->required();
  solve->add_option("--t", t)->required();
  auto* blowup = ric->add_subcommand("blowup", "blow-up time t*");
  blowup->add_option("--a", k.a)->required();
  blowup->add_option("--b", k.b)->required();
  blowup->add_option("--c", k.c)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ops_check->parsed()) return operators_check(check_degrees, check_meshes);
    if (ops_dump->parsed()) return operators_dump(dump_degree, dump_elements);

    if (solve->parsed()) {
      json j = riccati_json(k);
      j["t"] = t;
      j["y"] = csbp::riccati::evaluate(k, t);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (blowup->parsed()) {
      json j = riccati_json(k);
      const auto ts = csbp::riccati::blow_up_time(k);
      j["finite"] = ts.is_finite();
      j["t_star"] = ts.is_finite() ? json(ts.value_or_infinity()) : json(nullptr);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (sim->parsed()) {
      const auto cfg = resolve(sim_flags, "simulate");
      const auto res = csbp::run_simulation(cfg);
      if (!trajectory_path.empty()) {
        std::ofstream out(trajectory_path);
        out << "t,energy\n";
        char buf[80];
        for (std::size_t i = 0; i < res.step_times.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", res.step_times[i], res.step_energies[i]);
          out << buf;
        }
      }
      std::cout << json{{"h", res.h},
                        {"dt", res.dt},
                        {"final_time", res.final_time},
                        {"steps", res.step_times.size() - 1},
                        {"relative_energy_drift", res.relative_drift},
                        {"error_H", res.error_h}}
                       .dump(2)
                << "\n";
      return 0;
    }

    if (conv->parsed()) {
      const auto cfg = resolve(conv_flags, "convergence");
      const auto rep = csbp::run_convergence_study(cfg);
      if (!cfg.output_dir.empty()) csbp::write_convergence_outputs(rep);
      std::cout << csbp::convergence_csv(rep);
      std::cout << "error order " << rep.error_order.slope << " +/- " << rep.error_order.half_width
                << (rep.all_pass() ? "  PASS" : "  FAIL") << "\n";
      return rep.all_pass() ? 0 : 1;
    }

    if (scale->parsed()) {
      const auto cfg = resolve(scale_flags, "scaling");
      const auto rep = csbp::run_scaling_study(cfg);
      if (!cfg.output_dir.empty()) csbp::write_scaling_outputs(rep);
      std::cout << csbp::scaling_csv(rep);
      std::cout << csbp::scaling_summary_json(rep);
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const csbp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
