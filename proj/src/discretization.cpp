#include "csbp/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csbp/errors.hpp"

namespace csbp {

void check_shape(const GlobalOperator& gop, const FluxModel& model, const StateVector& u) {
  if (u.nodes != gop.num_nodes() || u.components != model.components() ||
      u.data.size() != u.nodes * static_cast<std::size_t>(u.components)) {
    throw DimensionMismatch("state shape (" + std::to_string(u.nodes) + " x " +
                            std::to_string(u.components) + ") does not match operator (" +
                            std::to_string(gop.num_nodes()) + " x " +
                            std::to_string(model.components()) + ")");
  }
}

StateVector sample_exact(const GlobalOperator& gop, const ExactSolution& exact, double t) {
  const auto x = gop.mesh().global_coordinates(gop.reference());
  StateVector u(x.size(), exact.components());
  for (std::size_t i = 0; i < x.size(); ++i) exact.state(x[i], t, u.node(i));
  return u;
}

StateVector sample_exact_dx(const GlobalOperator& gop, const ExactSolution& exact, double t) {
  const auto x = gop.mesh().global_coordinates(gop.reference());
  StateVector u(x.size(), exact.components());
  for (std::size_t i = 0; i < x.size(); ++i) exact.state_dx(x[i], t, u.node(i));
  return u;
}

StateVector split_rhs(const GlobalOperator& gop, const FluxModel& model, const StateVector& u) {
  check_shape(gop, model, u);
  const int nc = model.components();
  const auto ncs = static_cast<std::size_t>(nc);
  StateVector f(u.nodes, nc), df(u.nodes, nc), du(u.nodes, nc), rhs(u.nodes, nc);
  for (std::size_t i = 0; i < u.nodes; ++i) model.flux(u.node(i), f.node(i));
  gop.apply_d(f.data, df.data, nc);
  gop.apply_d(u.data, du.data, nc);

  const double a1 = model.alpha1(), a2 = model.alpha2();
  std::vector<double> a(ncs * ncs);
  for (std::size_t i = 0; i < u.nodes; ++i) {
    model.jacobian(u.node(i), a);
    for (std::size_t r = 0; r < ncs; ++r) {
      double adu = 0.0;
      for (std::size_t c = 0; c < ncs; ++c) adu += a[r * ncs + c] * du(i, static_cast<int>(c));
      rhs(i, static_cast<int>(r)) = -a1 * df(i, static_cast<int>(r)) - a2 * adu;
    }
  }
  return rhs;
}

double discrete_energy(const GlobalOperator& gop, const StateVector& u) {
  if (u.nodes != gop.num_nodes()) {
    throw DimensionMismatch("discrete_energy: state does not match operator");
  }
  const auto& hd = gop.h_diag();
  double e = 0.0;
  for (std::size_t i = 0; i < u.nodes; ++i) {
    double s = 0.0;
    for (double v : u.node(i)) s += v * v;
    e += hd(static_cast<Eigen::Index>(i)) * s;
  }
  return e;
}

double cfl_time_step(const GlobalOperator& gop, const FluxModel& model, const StateVector& u,
                     double cfl) {
  check_shape(gop, model, u);
  double speed = 0.0;
  for (std::size_t i = 0; i < u.nodes; ++i) speed = std::max(speed, model.max_wave_speed(u.node(i)));
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * gop.mesh().h() / speed;
}

namespace {

bool all_finite(const StateVector& u) {
  return std::all_of(u.data.begin(), u.data.end(), [](double v) { return std::isfinite(v); });
}

void axpy(StateVector& out, const StateVector& base, double a, const StateVector& k) {
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = base.data[i] + a * k.data[i];
}

}  // namespace

Trajectory rk4_integrate(const GlobalOperator& gop, const FluxModel& model, const StateVector& u0,
                         double final_time, double dt, const IntegrationOptions& options) {
  check_shape(gop, model, u0);
  if (!(dt > 0.0) || !(final_time > 0.0)) {
    throw InvalidArgument("rk4_integrate: dt and final_time must be positive");
  }
  const double dt_max = cfl_time_step(gop, model, u0, options.cfl);
  if (dt > dt_max * (1.0 + 1e-12)) {
    throw InvalidArgument("rk4_integrate: dt = " + std::to_string(dt) +
                          " violates the CFL limit " + std::to_string(dt_max));
  }

  std::vector<double> targets;
  for (double t : options.sample_times) {
    if (t > 0.0 && t < final_time) targets.push_back(t);
  }
  targets.push_back(final_time);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);
  traj.step_times.push_back(0.0);
  traj.step_energies.push_back(discrete_energy(gop, u0));

  StateVector u = u0, stage(u0.nodes, u0.components);
  double t = 0.0;
  std::size_t step = 0;
  for (double target : targets) {
    while (t < target) {
      // Land exactly on the target; avoid a sliver step from roundoff.
      double h = dt;
      if (t + h >= target - 1e-12 * dt) h = target - t;
      const StateVector k1 = split_rhs(gop, model, u);
      axpy(stage, u, 0.5 * h, k1);
      const StateVector k2 = split_rhs(gop, model, stage);
      axpy(stage, u, 0.5 * h, k2);
      const StateVector k3 = split_rhs(gop, model, stage);
      axpy(stage, u, h, k3);
      const StateVector k4 = split_rhs(gop, model, stage);
      for (std::size_t i = 0; i < u.data.size(); ++i) {
        u.data[i] += h / 6.0 * (k1.data[i] + 2.0 * k2.data[i] + 2.0 * k3.data[i] + k4.data[i]);
      }
      ++step;
      t = (h == target - t) ? target : t + h;
      if (!all_finite(u)) throw Divergence(step);
      traj.step_times.push_back(t);
      traj.step_energies.push_back(discrete_energy(gop, u));
    }
    traj.times.push_back(target);
    traj.states.push_back(u);
  }
  return traj;
}

TruncationError truncation_error(const GlobalOperator& gop, const FluxModel& model,
                                 const ExactSolution& exact, double t) {
  if (exact.components() != model.components()) {
    throw DimensionMismatch("truncation_error: exact solution and model disagree on components");
  }
  const StateVector u = sample_exact(gop, exact, t);
  const StateVector ux = sample_exact_dx(gop, exact, t);
  const StateVector rhs = split_rhs(gop, model, u);

  const int nc = model.components();
  const auto ncs = static_cast<std::size_t>(nc);
  TruncationError out;
  out.tau = StateVector(u.nodes, nc);
  std::vector<double> a(ncs * ncs);
  for (std::size_t i = 0; i < u.nodes; ++i) {
    model.jacobian(u.node(i), a);
    for (std::size_t r = 0; r < ncs; ++r) {
      double aux = 0.0;
      for (std::size_t c = 0; c < ncs; ++c) aux += a[r * ncs + c] * ux(i, static_cast<int>(c));
      // du/dt = -A(u) u_x; the scheme's residual is du/dt - rhs.
      const double tau = -aux - rhs(i, static_cast<int>(r));
      out.tau(i, static_cast<int>(r)) = tau;
      out.norm_inf = std::max(out.norm_inf, std::abs(tau));
    }
  }
  out.norm_h = h_norm(gop, out.tau);
  out.norm_relation_holds =
      out.norm_h <= std::sqrt(gop.mesh().length()) * out.norm_inf * (1.0 + 1e-12);
  return out;
}

}  // namespace csbp
