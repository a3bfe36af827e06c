#include "csbp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "csbp/errors.hpp"
#include "json.hpp"

namespace csbp {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_json(const OrderFit& f) { return {{"slope", f.slope}, {"half_width", f.half_width}}; }

ExactSolution exact_for(const StudyConfig& cfg, const FluxModel& model) {
  return ExactSolution::for_model(model, cfg.sigma, cfg.wavenumber);
}

GlobalOperator make_operator(int degree, int elements) {
  return assemble_global(PeriodicMesh(0.0, 1.0, elements, degree + 1),
                         build_reference_element(degree));
}

std::vector<double> envelope_times(const StudyConfig& cfg) {
  const double t_final = cfg.final_time();
  std::vector<double> t(static_cast<std::size_t>(cfg.envelope_samples));
  for (int i = 0; i < cfg.envelope_samples; ++i) {
    t[i] = t_final * static_cast<double>(i + 1) / cfg.envelope_samples;
  }
  return t;
}

double error_norm(const GlobalOperator& gop, const StateVector& uh, const ExactSolution& exact,
                  double t) {
  StateVector e = sample_exact(gop, exact, t);
  for (std::size_t i = 0; i < e.data.size(); ++i) e.data[i] -= uh.data[i];
  return h_norm(gop, e);
}

double pick_dt(const StudyConfig& cfg, const GlobalOperator& gop, const FluxModel& model,
               const StateVector& u0) {
  return cfg.dt ? *cfg.dt : cfl_time_step(gop, model, u0, cfg.cfl);
}

double final_error(const StudyConfig& cfg, int elements, double dt) {
  const FluxModel model = FluxModel::from_name(cfg.problem);
  const ExactSolution exact = exact_for(cfg, model);
  const GlobalOperator gop = make_operator(cfg.degree, elements);
  const StateVector u0 = sample_exact(gop, exact, 0.0);
  const Trajectory traj = rk4_integrate(gop, model, u0, cfg.final_time(), dt, {.cfl = cfg.cfl, .sample_times = {}});
  return error_norm(gop, traj.states.back(), exact, cfg.final_time());
}

ConvergenceRow run_mesh(const StudyConfig& cfg, int elements) {
  const FluxModel model = FluxModel::from_name(cfg.problem);
  const ExactSolution exact = exact_for(cfg, model);
  const GlobalOperator gop = make_operator(cfg.degree, elements);
  const double t_final = cfg.final_time();

  ConvergenceRow row;
  row.h = gop.mesh().h();
  row.elements = elements;
  row.degree = cfg.degree;

  const StateVector u0 = sample_exact(gop, exact, 0.0);
  row.dt = pick_dt(cfg, gop, model, u0);
  IntegrationOptions opts;
  opts.cfl = cfg.cfl;
  opts.sample_times = envelope_times(cfg);
  Trajectory traj;
  try {
    traj = rk4_integrate(gop, model, u0, t_final, row.dt, opts);
  } catch (const Divergence& d) {
    throw Divergence(d.step(), elements);
  }
  row.steps = traj.step_times.size() - 1;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    row.sample_times.push_back(traj.times[i]);
    row.sample_errors.push_back(error_norm(gop, traj.states[i], exact, traj.times[i]));
  }
  row.error_h = row.sample_errors.back();

  row.constants = bound_constants(gop, model, exact,
                                  uniform_times(t_final, static_cast<std::size_t>(cfg.time_samples)));
  row.tau_inf = row.constants.ingredients.tau_inf;
  const auto fine = bound_constants(
      gop, model, exact, uniform_times(t_final, 2 * static_cast<std::size_t>(cfg.time_samples) - 1));
  row.sup_refinement_change =
      std::max(std::abs(fine.growth_sup - row.constants.growth_sup) / fine.growth_sup,
               std::abs(fine.ingredients.tau_inf - row.tau_inf) / std::max(fine.ingredients.tau_inf, 1e-300));
  return row;
}

// Envelope status and margins once the family coefficients are known.
void apply_envelope(ConvergenceRow& row, double t_final) {
  const riccati::Coefficients k{row.coefficients.a, row.coefficients.b, row.coefficients.c};
  row.t_star = riccati::blow_up_time(k);

  std::vector<double> times, errors;
  for (std::size_t i = 0; i < row.sample_times.size(); ++i) {
    if (row.t_star.exceeds(row.sample_times[i])) {
      times.push_back(row.sample_times[i]);
      errors.push_back(row.sample_errors[i]);
    }
  }
  row.samples_below_t_star = times.size();
  row.max_margin = row.min_margin = kNaN;
  row.partial_envelope_pass = true;
  if (!times.empty()) {
    const riccati::EnvelopeReport env = riccati::envelope_check(times, errors, k);
    row.partial_envelope_pass = env.pass;
    row.max_margin = *std::max_element(env.margins.begin(), env.margins.end());
    row.min_margin = *std::min_element(env.margins.begin(), env.margins.end());
  }
  if (!row.t_star.exceeds(t_final)) {
    row.envelope = EnvelopeStatus::not_applicable;
  } else {
    row.envelope = row.partial_envelope_pass ? EnvelopeStatus::pass : EnvelopeStatus::fail;
  }
}

bool nondecreasing(const std::vector<riccati::BlowUpTime>& t) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i].value_or_infinity() < t[i - 1].value_or_infinity()) return false;
  }
  return true;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << text;
}

template <typename T, typename F>
std::vector<T> per_mesh(const std::vector<int>& meshes, F&& work) {
  std::vector<std::future<T>> jobs;
  jobs.reserve(meshes.size());
  for (int ne : meshes) jobs.push_back(std::async(std::launch::async, work, ne));
  std::vector<T> out;
  out.reserve(meshes.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

StudyConfig StudyConfig::from_json_text(std::string_view text) {
  static const std::vector<std::string> known = {
      "problem", "degree", "meshes", "sigma", "wavenumber", "final_time_fraction", "dt", "cfl",
      "time_samples", "envelope_samples", "output_dir", "study", "dt_halving_check",
      "min_order_offset"};
  StudyConfig cfg;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
    cfg.problem = j.value("problem", cfg.problem);
    cfg.degree = j.value("degree", cfg.degree);
    cfg.meshes = j.value("meshes", cfg.meshes);
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.wavenumber = j.value("wavenumber", cfg.wavenumber);
    cfg.final_time_fraction = j.value("final_time_fraction", cfg.final_time_fraction);
    if (j.contains("dt") && !j["dt"].is_null()) cfg.dt = j["dt"].get<double>();
    cfg.cfl = j.value("cfl", cfg.cfl);
    cfg.time_samples = j.value("time_samples", cfg.time_samples);
    cfg.envelope_samples = j.value("envelope_samples", cfg.envelope_samples);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.study = j.value("study", cfg.study);
    cfg.dt_halving_check = j.value("dt_halving_check", cfg.dt_halving_check);
    cfg.min_order_offset = j.value("min_order_offset", cfg.min_order_offset);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

StudyConfig StudyConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string StudyConfig::to_json_text() const {
  json j = {{"problem", problem},
            {"degree", degree},
            {"meshes", meshes},
            {"sigma", sigma},
            {"wavenumber", wavenumber},
            {"final_time_fraction", final_time_fraction},
            {"dt", dt ? json(*dt) : json(nullptr)},
            {"cfl", cfl},
            {"time_samples", time_samples},
            {"envelope_samples", envelope_samples},
            {"output_dir", output_dir},
            {"study", study},
            {"dt_halving_check", dt_halving_check},
            {"min_order_offset", min_order_offset}};
  return j.dump(2);
}

void StudyConfig::validate(std::size_t min_levels) const {
  FluxModel::from_name(problem);
  if (degree < kMinDegree || degree > kMaxDegree) throw UnsupportedDegree(degree);
  if (meshes.size() < min_levels) {
    throw InsufficientData("study needs at least " + std::to_string(min_levels) +
                           " mesh levels, got " + std::to_string(meshes.size()));
  }
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] < 2) throw MeshTooSmall(meshes[i]);
    if (i > 0 && meshes[i] <= meshes[i - 1]) {
      throw InvalidArgument("mesh list must be strictly increasing");
    }
  }
  if (!(std::isfinite(sigma) && sigma != 0.0)) throw InvalidArgument("sigma must be nonzero");
  if (wavenumber < 1) throw InvalidArgument("wavenumber must be >= 1");
  if (!(final_time_fraction > 0.0 && final_time_fraction < 1.0)) {
    throw InvalidArgument("final_time_fraction must lie in (0, 1)");
  }
  if (dt && !(*dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(cfl > 0.0)) throw InvalidArgument("cfl must be positive");
  if (time_samples < 2) throw InvalidArgument("time_samples must be >= 2");
  if (envelope_samples < 1) throw InvalidArgument("envelope_samples must be >= 1");
}

double StudyConfig::breaking_time() const {
  return exact_for(*this, FluxModel::from_name(problem)).breaking_time();
}

std::string_view envelope_status_name(EnvelopeStatus s) {
  switch (s) {
    case EnvelopeStatus::pass: return "pass";
    case EnvelopeStatus::fail: return "fail";
    case EnvelopeStatus::not_applicable: return "not-applicable";
  }
  return "unknown";
}

bool ConvergenceReport::all_pass() const {
  return strictly_decreasing && order_ok && envelope_ok && t_star_nondecreasing && sup_sampling_ok &&
         (!dt_halving || dt_halving->pass);
}

ConvergenceReport run_convergence_study(const StudyConfig& config) {
  config.validate(3);
  ConvergenceReport rep;
  rep.config = config;
  rep.rows = per_mesh<ConvergenceRow>(config.meshes,
                                      [&config](int ne) { return run_mesh(config, ne); });

  const FluxModel model = FluxModel::from_name(config.problem);
  std::vector<BoundConstants> family;
  for (const auto& r : rep.rows) family.push_back(r.constants);
  const auto coeffs = riccati_coefficients(family, model);
  std::vector<double> h, err, tau;
  std::vector<riccati::BlowUpTime> t_stars;
  rep.envelope_ok = true;
  rep.sup_sampling_ok = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    auto& row = rep.rows[i];
    row.coefficients = coeffs[i];
    apply_envelope(row, config.final_time());
    if (row.envelope == EnvelopeStatus::fail) rep.envelope_ok = false;
    if (!(row.sup_refinement_change < 0.01)) rep.sup_sampling_ok = false;
    h.push_back(row.h);
    err.push_back(row.error_h);
    tau.push_back(row.tau_inf);
    t_stars.push_back(row.t_star);
  }
  rep.error_order = fit_order(h, err);
  rep.tau_order = fit_order(h, tau);
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < err.size(); ++i) {
    if (!(err[i] < err[i - 1])) rep.strictly_decreasing = false;
  }
  rep.order_ok = rep.error_order.slope >= config.degree - config.min_order_offset;
  rep.t_star_nondecreasing = nondecreasing(t_stars);

  if (config.dt_halving_check) {
    const auto& finest = rep.rows.back();
    DtHalvingCheck chk;
    chk.error = finest.error_h;
    chk.error_halved = final_error(config, finest.elements, 0.5 * finest.dt);
    chk.relative_change = std::abs(chk.error_halved - chk.error) / chk.error;
    chk.pass = chk.relative_change < 0.01;
    rep.dt_halving = chk;
  }
  return rep;
}

bool ScalingReport::all_pass() const {
  const double p = config.degree;
  return a_slope.slope >= -1.7 && a_slope.slope <= -1.3 && std::abs(b_slope.slope) <= 0.2 &&
         c_slope.slope >= p - 0.3 && c_slope.slope <= p + 0.7 && t_star_nondecreasing &&
         std::abs(h_slope.slope - 1.0) <= 0.05 && std::abs(q_slope.slope) <= 0.05 &&
         std::abs(d_slope.slope + 1.0) <= 0.05;
}

ScalingReport run_scaling_study(const StudyConfig& config) {
  config.validate(4);
  const FluxModel model = FluxModel::from_name(config.problem);
  const double t_final = config.final_time();
  const auto times = uniform_times(t_final, static_cast<std::size_t>(config.time_samples));

  ScalingReport rep;
  rep.config = config;
  std::vector<BoundConstants> family = per_mesh<BoundConstants>(config.meshes, [&](int ne) {
    const GlobalOperator gop = make_operator(config.degree, ne);
    return bound_constants(gop, model, exact_for(config, model), times);
  });
  const auto coeffs = riccati_coefficients(family, model);
  const OperatorScaling ops = operator_scaling_study(config.degree, config.meshes);

  std::vector<double> h, a, b, bf, c, ac, jd;
  std::vector<riccati::BlowUpTime> t_stars;
  for (std::size_t i = 0; i < family.size(); ++i) {
    ScalingRow row;
    row.h = family[i].h;
    row.elements = family[i].elements;
    row.a = coeffs[i].a;
    row.b = coeffs[i].b_mesh;
    row.c = coeffs[i].c;
    row.jacobian_difference = family[i].ingredients.jacobian_difference;
    row.h_norm = ops.h_norm[i];
    row.q_norm = ops.q_norm[i];
    row.d_norm = ops.d_norm[i];
    row.t_star = riccati::blow_up_time({coeffs[i].a, coeffs[i].b, coeffs[i].c});
    rep.rows.push_back(row);
    h.push_back(row.h);
    a.push_back(row.a);
    b.push_back(row.b);
    bf.push_back(coeffs[i].b);
    c.push_back(row.c);
    ac.push_back(row.a * row.c);
    jd.push_back(row.jacobian_difference);
    t_stars.push_back(row.t_star);
  }
  rep.a_slope = fit_order(h, a);
  rep.b_slope = fit_order(h, b);
  rep.b_family_slope = fit_order(h, bf);
  rep.c_slope = fit_order(h, c);
  rep.ac_slope = fit_order(h, ac);
  rep.jacobian_difference_slope = fit_order(h, jd);
  rep.h_slope = {ops.h_slope, 0.0};
  rep.q_slope = {ops.q_slope, 0.0};
  rep.d_slope = {ops.d_slope, 0.0};
  rep.t_star_nondecreasing = nondecreasing(t_stars);

  // Least-squares slope of t* against log(1/h).
  std::vector<double> xs, ys;
  for (const auto& r : rep.rows) {
    if (r.t_star.is_finite()) {
      xs.push_back(-std::log(r.h));
      ys.push_back(r.t_star.value_or_infinity());
    }
  }
  rep.t_star_log_trend = kNaN;
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.t_star_log_trend = sxy / sxx;
  }
  return rep;
}

SimulationResult run_simulation(const StudyConfig& config) {
  config.validate(1);
  const FluxModel model = FluxModel::from_name(config.problem);
  const ExactSolution exact = exact_for(config, model);
  const GlobalOperator gop = make_operator(config.degree, config.meshes.front());
  const StateVector u0 = sample_exact(gop, exact, 0.0);

  SimulationResult res;
  res.h = gop.mesh().h();
  res.dt = pick_dt(config, gop, model, u0);
  res.final_time = config.final_time();
  const Trajectory traj = rk4_integrate(gop, model, u0, res.final_time, res.dt, {.cfl = config.cfl, .sample_times = {}});
  res.step_times = traj.step_times;
  res.step_energies = traj.step_energies;
  const double e0 = traj.step_energies.front();
  for (double e : traj.step_energies) {
    res.relative_drift = std::max(res.relative_drift, std::abs(e - e0) / e0);
  }
  res.error_h = error_norm(gop, traj.states.back(), exact, res.final_time);
  return res;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "h,n_e,p,error_H,tau_inf,a,b,c,Delta,t_star,envelope,max_margin\n";
  for (const auto& r : report.rows) {
    const auto& k = r.coefficients;
    out += fmt(r.h) + ',' + std::to_string(r.elements) + ',' + std::to_string(r.degree) + ',' +
           fmt(r.error_h) + ',' + fmt(r.tau_inf) + ',' + fmt(k.a) + ',' + fmt(k.b) + ',' +
           fmt(k.c) + ',' + fmt(k.delta) + ',' + fmt(r.t_star.value_or_infinity()) + ',' +
           std::string(envelope_status_name(r.envelope)) + ',' + fmt(r.max_margin) + '\n';
  }
  return out;
}

std::string bounds_csv(const ConvergenceReport& report) {
  std::string out = "h,n_e,p,c_F,c_R,c_S,a,b,c,Delta\n";
  for (const auto& r : report.rows) {
    const auto& k = r.coefficients;
    out += fmt(r.h) + ',' + std::to_string(r.elements) + ',' + std::to_string(r.degree) + ',' +
           fmt(r.constants.c_f) + ',' + fmt(r.constants.c_r) + ',' + fmt(r.constants.c_s) + ',' +
           fmt(k.a) + ',' + fmt(k.b) + ',' + fmt(k.c) + ',' + fmt(k.delta) + '\n';
  }
  return out;
}

std::string convergence_summary_json(const ConvergenceReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n_e", r.elements},
                    {"h", r.h},
                    {"dt", r.dt},
                    {"steps", r.steps},
                    {"error_H", r.error_h},
                    {"tau_inf", r.tau_inf},
                    {"c_F", r.constants.c_f},
                    {"c_R", r.constants.c_r},
                    {"c_S", r.constants.c_s},
                    {"a", r.coefficients.a},
                    {"b", r.coefficients.b},
                    {"b_mesh", r.coefficients.b_mesh},
                    {"c", r.coefficients.c},
                    {"Delta", r.coefficients.delta},
                    {"t_star", number_or_null(r.t_star.value_or_infinity())},
                    {"t_star_finite", r.t_star.is_finite()},
                    {"envelope", envelope_status_name(r.envelope)},
                    {"samples_below_t_star", r.samples_below_t_star},
                    {"partial_envelope_pass", r.partial_envelope_pass},
                    {"sup_refinement_change", r.sup_refinement_change},
                    {"max_margin", number_or_null(r.max_margin)},
                    {"min_margin", number_or_null(r.min_margin)}});
  }
  json j = {{"study", "convergence"},
            {"config", json::parse(report.config.to_json_text())},
            {"final_time", report.config.final_time()},
            {"breaking_time", report.config.breaking_time()},
            {"rows", rows},
            {"error_order", fit_json(report.error_order)},
            {"tau_order", fit_json(report.tau_order)},
            {"checks",
             {{"strictly_decreasing", report.strictly_decreasing},
              {"order", report.order_ok},
              {"envelope", report.envelope_ok},
              {"t_star_nondecreasing", report.t_star_nondecreasing},
              {"sup_sampling", report.sup_sampling_ok}}},
            {"pass", report.all_pass()}};
  if (report.dt_halving) {
    const auto& d = *report.dt_halving;
    j["dt_halving"] = {{"error", d.error},
                       {"error_halved", d.error_halved},
                       {"relative_change", d.relative_change},
                       {"pass", d.pass}};
    j["checks"]["dt_halving"] = d.pass;
  }
  return j.dump(2) + "\n";
}

std::string scaling_csv(const ScalingReport& report) {
  std::string out = "h,n_e,a,b,c,A_star,H_k,Q_k,D_k,t_star\n";
  for (const auto& r : report.rows) {
    out += fmt(r.h) + ',' + std::to_string(r.elements) + ',' + fmt(r.a) + ',' + fmt(r.b) + ',' +
           fmt(r.c) + ',' + fmt(r.jacobian_difference) + ',' + fmt(r.h_norm) + ',' +
           fmt(r.q_norm) + ',' + fmt(r.d_norm) + ',' + fmt(r.t_star.value_or_infinity()) + '\n';
  }
  return out;
}

std::string scaling_summary_json(const ScalingReport& report) {
  json j = {{"study", "scaling"},
            {"config", json::parse(report.config.to_json_text())},
            {"slopes",
             {{"a", fit_json(report.a_slope)},
              {"b", fit_json(report.b_slope)},
              {"b_family", fit_json(report.b_family_slope)},
              {"c", fit_json(report.c_slope)},
              {"ac", fit_json(report.ac_slope)},
              {"A_star", fit_json(report.jacobian_difference_slope)},
              {"H_k", fit_json(report.h_slope)},
              {"Q_k", fit_json(report.q_slope)},
              {"D_k", fit_json(report.d_slope)}}},
            {"t_star_nondecreasing", report.t_star_nondecreasing},
            {"t_star_log_trend", number_or_null(report.t_star_log_trend)},
            {"pass", report.all_pass()}};
  return j.dump(2) + "\n";
}

void write_convergence_outputs(const ConvergenceReport& report) {
  const std::filesystem::path dir(report.config.output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", convergence_csv(report));
  write_file(dir / "bounds.csv", bounds_csv(report));
  write_file(dir / "summary.json", convergence_summary_json(report));
}

void write_scaling_outputs(const ScalingReport& report) {
  const std::filesystem::path dir(report.config.output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", scaling_csv(report));
  write_file(dir / "summary.json", scaling_summary_json(report));
}

}  // namespace csbp
