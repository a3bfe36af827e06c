#include "csbp/flux_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "csbp/errors.hpp"

namespace csbp {

FluxModel FluxModel::burgers() { return FluxModel(Kind::burgers, 1, 2.0, 1.0); }

// Component Hessians are I and [[0,1],[1,0]]; ||R|| <= sum_i ||H_i|| ||e||^2 / 2 gives c_r = 2.
FluxModel FluxModel::symmetric2() { return FluxModel(Kind::symmetric2, 2, 2.0, 2.0); }

FluxModel FluxModel::from_name(std::string_view name) {
  if (name == "burgers") return burgers();
  if (name == "symmetric2") return symmetric2();
  throw InvalidArgument("unknown flux model '" + std::string(name) +
                        "' (expected burgers or symmetric2)");
}

std::string_view FluxModel::name() const {
  return kind_ == Kind::burgers ? "burgers" : "symmetric2";
}

FluxModel FluxModel::with_hessian_bound(double c_r) const {
  FluxModel m = *this;
  m.hessian_bound_ = c_r;
  return m;
}

void FluxModel::flux(std::span<const double> u, std::span<double> f) const {
  switch (kind_) {
    case Kind::burgers:
      f[0] = 0.5 * u[0] * u[0];
      break;
    case Kind::symmetric2:
      f[0] = 0.5 * (u[0] * u[0] + u[1] * u[1]);
      f[1] = u[0] * u[1];
      break;
  }
}

void FluxModel::jacobian(std::span<const double> u, std::span<double> a) const {
  switch (kind_) {
    case Kind::burgers:
      a[0] = u[0];
      break;
    case Kind::symmetric2:
      a[0] = u[0];
      a[1] = u[1];
      a[2] = u[1];
      a[3] = u[0];
      break;
  }
}

double FluxModel::max_wave_speed(std::span<const double> u) const {
  switch (kind_) {
    case Kind::burgers:
      return std::abs(u[0]);
    case Kind::symmetric2:
      return std::max(std::abs(u[0] + u[1]), std::abs(u[0] - u[1]));
  }
  return 0.0;
}

HomogeneityReport check_homogeneity(const FluxModel& model, std::span<const double> u,
                                    double eta) {
  const auto nc = static_cast<std::size_t>(model.components());
  if (u.size() != nc) {
    throw DimensionMismatch("check_homogeneity: state has the wrong number of components");
  }
  if (eta == 0.0) {
    throw InvalidArgument("check_homogeneity: scale factor must be nonzero");
  }
  std::vector<double> f(nc), f_scaled(nc), scaled(nc), a(nc * nc);
  for (std::size_t c = 0; c < nc; ++c) scaled[c] = eta * u[c];
  model.flux(u, f);
  model.flux(scaled, f_scaled);
  model.jacobian(u, a);

  HomogeneityReport r;
  const double eta_beta = std::pow(std::abs(eta), model.degree()) *
                          ((eta < 0.0 && std::fmod(model.degree(), 2.0) != 0.0) ? -1.0 : 1.0);
  double f_mag = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    double au = 0.0;
    for (std::size_t j = 0; j < nc; ++j) au += a[i * nc + j] * u[j];
    r.scaling_residual = std::max(r.scaling_residual, std::abs(f_scaled[i] - eta_beta * f[i]));
    r.euler_residual = std::max(r.euler_residual, std::abs(au - model.degree() * f[i]));
    f_mag = std::max(f_mag, std::abs(f[i]));
  }
  const double scaled_tol = 1e-13 * (1.0 + std::abs(eta_beta) * f_mag);
  r.pass = r.scaling_residual <= scaled_tol && r.euler_residual <= 1e-13 * (1.0 + f_mag);
  return r;
}

RemainderReport taylor_remainder(const FluxModel& model, std::span<const double> u,
                                 std::span<const double> u_h) {
  const auto nc = static_cast<std::size_t>(model.components());
  if (u.size() != u_h.size() || u.size() % nc != 0) {
    throw DimensionMismatch("taylor_remainder: u and u_h must have the same node-interleaved shape");
  }
  RemainderReport r;
  r.remainder.assign(u.size(), 0.0);
  std::vector<double> f(nc), fh(nc), a(nc * nc);
  double e_sq = 0.0, r_sq = 0.0;
  for (std::size_t node = 0; node < u.size() / nc; ++node) {
    const auto un = u.subspan(node * nc, nc);
    const auto uhn = u_h.subspan(node * nc, nc);
    model.flux(un, f);
    model.flux(uhn, fh);
    model.jacobian(un, a);
    for (std::size_t i = 0; i < nc; ++i) {
      double ae = 0.0;
      for (std::size_t j = 0; j < nc; ++j) ae += a[i * nc + j] * (un[j] - uhn[j]);
      const double ri = fh[i] - f[i] + ae;
      r.remainder[node * nc + i] = ri;
      r_sq += ri * ri;
      e_sq += (un[i] - uhn[i]) * (un[i] - uhn[i]);
    }
  }
  r.remainder_norm = std::sqrt(r_sq);
  r.bound = 0.5 * model.hessian_bound() * e_sq;
  r.holds = r.remainder_norm <= r.bound * (1.0 + 1e-12);
  return r;
}

SineCharacteristics::SineCharacteristics(double amplitude, int wavenumber, double shift)
    : amplitude_(amplitude), wavenumber_(wavenumber), shift_(shift) {
  if (wavenumber < 1) throw InvalidArgument("SineCharacteristics: wavenumber must be >= 1");
}

double SineCharacteristics::breaking_time() const {
  if (amplitude_ == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * std::numbers::pi * wavenumber_ * std::abs(amplitude_));
}

double SineCharacteristics::initial(double x) const {
  return amplitude_ * std::sin(2.0 * std::numbers::pi * wavenumber_ * (x + shift_));
}

double SineCharacteristics::initial_dx(double x) const {
  const double k = 2.0 * std::numbers::pi * wavenumber_;
  return amplitude_ * k * std::cos(k * (x + shift_));
}

double SineCharacteristics::foot(double x, double t) const {
  if (t < 0.0) throw InvalidArgument("SineCharacteristics: negative time");
  if (t >= breaking_time()) throw PostBreaking(t, breaking_time());
  if (t == 0.0) return x;

  // g is strictly increasing before breaking; the root lies within |amplitude| t of x.
  auto g = [&](double xi) { return xi + initial(xi) * t - x; };
  const double reach = std::abs(amplitude_) * t;
  double lo = x - reach, hi = x + reach;
  double xi = x - initial(x) * t;
  constexpr double kTol = 1e-13;
  for (int it = 0; it < 50; ++it) {
    const double gx = g(xi);
    if (gx == 0.0) return xi;
    if (gx < 0.0) lo = xi; else hi = xi;
    double next = xi - gx / (1.0 + initial_dx(xi) * t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - xi);
    xi = next;
    if (step <= kTol) return xi;
  }
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double SineCharacteristics::value(double x, double t) const { return initial(foot(x, t)); }

double SineCharacteristics::dx(double x, double t) const {
  const double d0 = initial_dx(foot(x, t));
  return d0 / (1.0 + d0 * t);
}

double burgers_exact(double sigma, double x, double t) {
  return SineCharacteristics(sigma).value(x, t);
}

ExactSolution::ExactSolution(Kind kind, std::vector<SineCharacteristics> waves,
                             std::vector<double> state)
    : kind_(kind), waves_(std::move(waves)), constant_(std::move(state)) {}

ExactSolution ExactSolution::burgers(double sigma, int wavenumber) {
  return ExactSolution(Kind::burgers, {SineCharacteristics(sigma, wavenumber)}, {});
}

ExactSolution ExactSolution::symmetric2(double sigma, int wavenumber) {
  // s0 = sigma (sin + cos/2) = R sin(theta + phi), w0 = sigma (sin - cos/2) = R sin(theta - phi).
  const double r = sigma * std::sqrt(1.25);
  const double phi = std::atan(0.5);
  const double shift = phi / (2.0 * std::numbers::pi * wavenumber);
  return ExactSolution(Kind::symmetric2,
                       {SineCharacteristics(r, wavenumber, shift),
                        SineCharacteristics(r, wavenumber, -shift)},
                       {});
}

ExactSolution ExactSolution::constant(std::vector<double> state) {
  if (state.empty()) throw InvalidArgument("ExactSolution::constant: empty state");
  return ExactSolution(Kind::constant, {}, std::move(state));
}

ExactSolution ExactSolution::for_model(const FluxModel& model, double sigma, int wavenumber) {
  return model.kind() == FluxModel::Kind::burgers ? burgers(sigma, wavenumber)
                                                  : symmetric2(sigma, wavenumber);
}

int ExactSolution::components() const {
  switch (kind_) {
    case Kind::burgers: return 1;
    case Kind::symmetric2: return 2;
    case Kind::constant: return static_cast<int>(constant_.size());
  }
  return 0;
}

double ExactSolution::breaking_time() const {
  double tb = std::numeric_limits<double>::infinity();
  for (const auto& w : waves_) tb = std::min(tb, w.breaking_time());
  return tb;
}

void ExactSolution::check_time(double t) const {
  if (t >= breaking_time()) throw PostBreaking(t, breaking_time());
}

void ExactSolution::state(double x, double t, std::span<double> out) const {
  check_time(t);
  switch (kind_) {
    case Kind::burgers:
      out[0] = waves_[0].value(x, t);
      break;
    case Kind::symmetric2: {
      const double s = waves_[0].value(x, t);
      const double w = waves_[1].value(x, t);
      out[0] = 0.5 * (s + w);
      out[1] = 0.5 * (s - w);
      break;
    }
    case Kind::constant:
      std::copy(constant_.begin(), constant_.end(), out.begin());
      break;
  }
}

void ExactSolution::state_dx(double x, double t, std::span<double> out) const {
  check_time(t);
  switch (kind_) {
    case Kind::burgers:
      out[0] = waves_[0].dx(x, t);
      break;
    case Kind::symmetric2: {
      const double s = waves_[0].dx(x, t);
      const double w = waves_[1].dx(x, t);
      out[0] = 0.5 * (s + w);
      out[1] = 0.5 * (s - w);
      break;
    }
    case Kind::constant:
      std::fill(out.begin(), out.end(), 0.0);
      break;
  }
}

}  // namespace csbp
