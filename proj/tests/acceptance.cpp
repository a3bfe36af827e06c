// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "csbp/discretization.hpp"
#include "csbp/error_bounds.hpp"
#include "csbp/errors.hpp"
#include "csbp/fit.hpp"
#include "csbp/harness.hpp"
#include "csbp/riccati.hpp"
#include "csbp/sbp_core.hpp"

using namespace csbp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GlobalOperator make(int p, int ne) {
  return assemble_global(PeriodicMesh(0.0, 1.0, ne, p + 1), build_reference_element(p));
}

Outcome sbp_identities() {
  double worst_ref = 0.0, worst_skew = 0.0;
  for (int p : {1, 2, 3, 4}) {
    const auto ref = build_reference_element(p);
    const DenseMatrix r = ref.q + ref.q.transpose() - DenseMatrix(ref.e.asDiagonal());
    worst_ref = std::max(worst_ref, r.cwiseAbs().maxCoeff() / ref.q.cwiseAbs().maxCoeff());
    for (int ne = 2; ne <= 128; ne *= 2) {
      const auto g = make(p, ne);
      const SparseMatrix qt = g.q().transpose();
      const SparseMatrix s = g.q() + qt;
      for (int k = 0; k < s.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(s, k); it; ++it) worst_skew = std::max(worst_skew, std::abs(it.value()));
      }
    }
  }
  return {worst_ref <= 1e-13 && worst_skew <= 1e-13,
          fmt("max rel |Q+Q^T-E| = %.2e, max |Q_glob+Q_glob^T| = %.2e", worst_ref, worst_skew)};
}

Outcome semi_discrete_conservation() {
  std::mt19937 rng(20241);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (const auto& model : {FluxModel::burgers(), FluxModel::symmetric2()}) {
    for (int p : {2, 3}) {
      for (int ne : {16, 64}) {
        const auto g = make(p, ne);
        for (int trial = 0; trial < 100; ++trial) {
          StateVector u(g.num_nodes(), model.components());
          for (auto& v : u.data) v = dist(rng);
          const auto rhs = split_rhs(g, model, u);
          double s = 0.0;
          for (std::size_t i = 0; i < u.nodes; ++i) {
            for (int c = 0; c < u.components; ++c) s += u(i, c) * g.h_diag()(static_cast<Eigen::Index>(i)) * rhs(i, c);
          }
          worst = std::max(worst, std::abs(s) / (1.0 + discrete_energy(g, u)));
        }
      }
    }
  }
  return {worst <= 1e-12, fmt("max |u^T H rhs| / (1 + ||u||_H^2) = %.2e over 800 states", worst)};
}

double energy_drift(const GlobalOperator& g, const StateVector& u0, double t_final, double dt) {
  const auto traj = rk4_integrate(g, FluxModel::burgers(), u0, t_final, dt);
  const double e0 = traj.step_energies.front();
  double m = 0.0;
  for (double e : traj.step_energies) m = std::max(m, std::abs(e - e0) / e0);
  return m;
}

Outcome time_integrated_conservation() {
  const auto g = make(3, 32);
  const auto ex = ExactSolution::burgers(1.0, 1);
  const auto u0 = sample_exact(g, ex, 0.0);
  const double t_final = 0.5 * ex.breaking_time();
  const double drift = energy_drift(g, u0, t_final, 1e-4);

  // Halving ratios are measured where the drift sits well above roundoff.
  constexpr double kFloor = 1e-12;
  std::vector<double> dts{3.2e-3, 1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
  std::vector<double> drifts;
  for (double dt : dts) drifts.push_back(energy_drift(g, u0, t_final, dt));
  bool ratios_ok = true;
  int measured = 0;
  std::string ratios;
  for (std::size_t i = 0; i + 1 < dts.size(); ++i) {
    if (drifts[i + 1] < kFloor) continue;
    const double r = drifts[i] / drifts[i + 1];
    ratios += fmt(" %.1f", r);
    ++measured;
    ratios_ok = ratios_ok && r >= 12.0 && r <= 20.0;
  }
  return {drift <= 1e-9 && measured >= 2 && ratios_ok,
          fmt("drift(dt=1e-4) = %.2e; halving ratios above roundoff:%s", drift, ratios.c_str())};
}

Outcome truncation_order() {
  bool ok = true;
  std::string detail;
  const auto ex = ExactSolution::burgers(1.0, 1);
  for (int p : {2, 3}) {
    for (double frac : {0.0, 0.25, 0.5}) {
      std::vector<double> h, tau;
      for (int ne : {16, 32, 64, 128}) {
        const auto g = make(p, ne);
        h.push_back(g.mesh().h());
        tau.push_back(truncation_error(g, FluxModel::burgers(), ex, frac * ex.breaking_time()).norm_inf);
      }
      const double s = fit_order(h, tau).slope;
      const bool in = s >= p - 0.3 && s <= p + 0.7;
      if (frac < 0.5) ok = ok && in;
      detail += fmt(" p=%d t=%.2fTb:%.2f%s", p, frac, s, frac < 0.5 ? "" : "(info)");
    }
  }
  return {ok, "slopes" + detail};
}

Outcome term_inequalities() {
  std::mt19937 rng(5150);
  bool ok = true;
  double worst_ratio = 0.0, worst_hadamard = 0.0;
  long checks = 0;
  for (const auto& model : {FluxModel::burgers(), FluxModel::symmetric2()}) {
    const auto ex = ExactSolution::for_model(model, 1.0, 1);
    for (int p : {2, 3}) {
      for (int ne : {16, 64}) {
        const auto g = make(p, ne);
        const auto snap = exact_snapshot(g, model, ex, 0.5 * ex.breaking_time());
        std::uniform_real_distribution<double> logscale(-4.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
          const double scale = std::pow(10.0, logscale(rng));
          std::uniform_real_distribution<double> dist(-scale, scale);
          StateVector e(g.num_nodes(), model.components());
          for (auto& v : e.data) v = dist(rng);
          const auto rep = term_inequality_report(g, model, snap, e);
          ok = ok && rep.all_pass();
          for (const auto* t : {&rep.term1, &rep.term2, &rep.term3, &rep.term4}) {
            if (t->rhs > 0.0) worst_ratio = std::max(worst_ratio, t->lhs / t->rhs);
          }
          const double rel = std::abs(rep.hadamard_lhs - rep.hadamard_rhs) / std::abs(rep.hadamard_rhs);
          worst_hadamard = std::max(worst_hadamard, rel);
          ++checks;
        }
      }
    }
  }
  ok = ok && worst_hadamard <= 1e-12;
  return {ok, fmt("%ld error vectors, max lhs/rhs = %.3f, max Hadamard rel. error = %.2e", checks, worst_ratio,
                  worst_hadamard)};
}

Outcome riccati_closed_forms() {
  using namespace riccati;
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.05, 5.0), frac(0.05, 0.95), above(1.1, 4.0);
  auto make_case = [&](Case kind) -> Coefficients {
    const double a = u(rng), b = u(rng), c = u(rng);
    switch (kind) {
      case Case::linear_constant: return {0.0, 0.0, c};
      case Case::linear_exponential: return {0.0, b, c};
      case Case::tangent_pure: return {a, 0.0, c};
      case Case::real_roots: return {a, 2.0 * std::sqrt(a * c) * above(rng), c};
      case Case::double_root: return {a, b, b * b / (4.0 * a)};
      case Case::complex_roots: return {a, 2.0 * std::sqrt(a * c) * frac(rng), c};
      case Case::trivial: return {a, b, 0.0};
    }
    return {};
  };
  double worst = 0.0;
  bool classes_ok = true;
  for (Case kind : {Case::linear_constant, Case::linear_exponential, Case::tangent_pure, Case::real_roots,
                    Case::double_root, Case::complex_roots, Case::trivial}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Coefficients k = make_case(kind);
      classes_ok = classes_ok && classify(k).kind == kind;
      const auto ts = blow_up_time(k);
      const double window = ts.is_finite() ? 0.9 * ts.value_or_infinity() : 2.0 / std::max(k.b, 1.0);
      for (int i = 0; i < 20; ++i) {
        const double t = window * i / 19.0;
        const double y = evaluate(k, t), z = numeric_oracle(k, t);
        const double rel = z == 0.0 ? std::abs(y) : std::abs(y - z) / std::abs(z);
        worst = std::max(worst, rel);
      }
    }
  }
  const double e1 = std::abs(blow_up_time({1, 0, 1}).value_or_infinity() - std::numbers::pi / 2);
  const double e2 = std::abs(blow_up_time({1, 3, 2}).value_or_infinity() - std::log(2.0));
  const double e3 = std::abs(blow_up_time({1, 2, 1}).value_or_infinity() - 1.0);
  const double e4 = std::abs(blow_up_time({1, 2, 2}).value_or_infinity() - std::numbers::pi / 4);
  const double worst_tstar = std::max({e1, e2, e3, e4});
  return {classes_ok && worst <= 1e-6 && worst_tstar <= 1e-12,
          fmt("max rel. error vs oracle = %.2e over 7 cases x 200 x 20; max t* error = %.1e", worst, worst_tstar)};
}

Outcome coefficient_scaling() {
  StudyConfig cfg;
  cfg.problem = "burgers";
  cfg.degree = 2;
  cfg.meshes = {16, 32, 64, 128, 256};
  const auto rep = run_scaling_study(cfg);
  const double sa = rep.a_slope.slope, sb = rep.b_slope.slope, sc = rep.c_slope.slope;
  const bool ok = sa >= -1.7 && sa <= -1.3 && sb >= -0.2 && sb <= 0.2 && sc >= 1.7 && sc <= 2.7;
  return {ok, fmt("slope(a) = %.3f, slope(b) = %.3f, slope(c) = %.3f over n_e = 16..256", sa, sb, sc)};
}

Outcome envelope_domination() {
  StudyConfig cfg;
  cfg.problem = "burgers";
  cfg.degree = 3;
  cfg.meshes = {32, 64, 128};
  cfg.sigma = 1.0;
  cfg.final_time_fraction = 0.5;
  cfg.envelope_samples = 50;
  cfg.dt_halving_check = false;
  const auto rep = run_convergence_study(cfg);
  int applicable = 0;
  bool envelope_ok = true, partial_ok = true;
  std::string tstars;
  for (const auto& r : rep.rows) {
    tstars += fmt(" %.4g", r.t_star.value_or_infinity());
    if (r.envelope != EnvelopeStatus::not_applicable) {
      ++applicable;
      envelope_ok = envelope_ok && r.envelope == EnvelopeStatus::pass && r.sample_times.size() == 50;
    }
    partial_ok = partial_ok && r.partial_envelope_pass;
  }
  const bool ok = envelope_ok && partial_ok && rep.t_star_nondecreasing;
  return {ok, fmt("T = %.4g, t* =%s; meshes with t* > T: %d of 3%s; samples below t* dominated: %s", cfg.final_time(),
                  tstars.c_str(), applicable, applicable == 0 ? " (domination check vacuous)" : "",
                  partial_ok ? "yes" : "no")};
}

Outcome convergence() {
  bool ok = true;
  std::string detail;
  for (const std::string problem : {"burgers", "symmetric2"}) {
    for (int p : {2, 3}) {
      StudyConfig cfg;
      cfg.problem = problem;
      cfg.degree = p;
      cfg.meshes = {16, 32, 64, 128};
      cfg.dt_halving_check = false;
      const auto rep = run_convergence_study(cfg);
      ok = ok && rep.strictly_decreasing && rep.error_order.slope >= p - 0.3;
      detail += fmt(" %s/p=%d:%.2f%s", problem.c_str(), p, rep.error_order.slope, rep.strictly_decreasing ? "" : "(!dec)");
    }
  }

  // symmetric2 against two decoupled Burgers runs on s = u1 + u2 and w = u1 - u2.
  double worst = 0.0;
  for (int p : {2, 3}) {
    const auto g = make(p, 32);
    const auto ex = ExactSolution::symmetric2(1.0, 1);
    const auto u0 = sample_exact(g, ex, 0.0);
    StateVector s0(u0.nodes, 1), w0(u0.nodes, 1);
    for (std::size_t i = 0; i < u0.nodes; ++i) {
      s0.data[i] = u0(i, 0) + u0(i, 1);
      w0.data[i] = u0(i, 0) - u0(i, 1);
    }
    const double t_final = 0.5 * ex.breaking_time();
    const double dt = cfl_time_step(g, FluxModel::symmetric2(), u0, 0.2);
    const auto us = rk4_integrate(g, FluxModel::symmetric2(), u0, t_final, dt).states.back();
    const auto ss = rk4_integrate(g, FluxModel::burgers(), s0, t_final, dt).states.back();
    const auto ws = rk4_integrate(g, FluxModel::burgers(), w0, t_final, dt).states.back();
    for (std::size_t i = 0; i < us.nodes; ++i) {
      worst = std::max(worst, std::abs(us(i, 0) - 0.5 * (ss.data[i] + ws.data[i])));
      worst = std::max(worst, std::abs(us(i, 1) - 0.5 * (ss.data[i] - ws.data[i])));
    }
  }
  ok = ok && worst <= 1e-10;
  return {ok, "orders" + detail + fmt("; symmetric2 vs decoupled Burgers max diff = %.2e", worst)};
}

Outcome operator_scaling() {
  bool ok = true;
  std::string detail;
  for (int p : {1, 2, 3, 4}) {
    const auto s = operator_scaling_study(p, {8, 16, 32, 64, 128});
    ok = ok && std::abs(s.h_slope - 1.0) <= 0.05 && std::abs(s.q_slope) <= 0.05 && std::abs(s.d_slope + 1.0) <= 0.05;
    detail += fmt(" p=%d:(%.3f,%.3f,%.3f)", p, s.h_slope, s.q_slope, s.d_slope);
  }
  return {ok, "slopes (H_k,Q_k,D_k)" + detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "SBP identities", 1.0, sbp_identities},
      {2, "semi-discrete energy conservation", 10.0, semi_discrete_conservation},
      {3, "time-integrated energy conservation", 30.0, time_integrated_conservation},
      {4, "truncation order", 30.0, truncation_order},
      {5, "Term I-IV inequalities", 60.0, term_inequalities},
      {6, "Riccati closed forms and blow-up times", 10.0, riccati_closed_forms},
      {7, "coefficient scaling", 120.0, coefficient_scaling},
      {8, "envelope domination and t* monotonicity", 180.0, envelope_domination},
      {9, "convergence", 300.0, convergence},
      {10, "operator scaling", 10.0, operator_scaling},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.budget_s;
    failures += pass ? 0 : 1;
    std::printf("criterion %2d %s: %s  %s  [%.2fs / %.0fs]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, c.budget_s);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
