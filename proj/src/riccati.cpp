#include "csbp/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "csbp/errors.hpp"

namespace csbp::riccati {

std::string_view case_name(Case c) {
  switch (c) {
    case Case::linear_constant: return "LinearConstant";
    case Case::linear_exponential: return "LinearExponential";
    case Case::tangent_pure: return "TangentPure";
    case Case::real_roots: return "RealRoots";
    case Case::double_root: return "DoubleRoot";
    case Case::complex_roots: return "ComplexRoots";
    case Case::trivial: return "Trivial";
  }
  return "unknown";
}

CaseInfo classify(const Coefficients& k) {
  for (double v : {k.a, k.b, k.c}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidCoefficient("Riccati coefficients must be finite and nonnegative, got (" +
                               std::to_string(k.a) + ", " + std::to_string(k.b) + ", " +
                               std::to_string(k.c) + ")");
    }
  }
  CaseInfo info;
  info.delta = k.b * k.b - 4.0 * k.a * k.c;
  if (k.a == 0.0) {
    info.kind = k.b == 0.0 ? Case::linear_constant : Case::linear_exponential;
    return info;
  }
  if (k.c == 0.0) {
    info.kind = Case::trivial;
    return info;
  }
  if (k.b == 0.0) {
    info.kind = Case::tangent_pure;
    info.omega = std::sqrt(-info.delta);
    info.beta = info.omega / (2.0 * k.a);
    return info;
  }
  const double scale = std::max(k.b * k.b, 4.0 * k.a * k.c);
  if (std::abs(info.delta) <= kDeltaTolerance * scale) {
    info.kind = Case::double_root;
    info.r1 = info.r2 = -k.b / (2.0 * k.a);
  } else if (info.delta > 0.0) {
    info.kind = Case::real_roots;
    const double s = std::sqrt(info.delta);
    info.r1 = -2.0 * k.c / (k.b + s);
    info.r2 = (-k.b - s) / (2.0 * k.a);
  } else {
    info.kind = Case::complex_roots;
    info.omega = std::sqrt(-info.delta);
    info.alpha = -k.b / (2.0 * k.a);
    info.beta = info.omega / (2.0 * k.a);
  }
  return info;
}

double BlowUpTime::value_or_infinity() const {
  return t_ ? *t_ : std::numeric_limits<double>::infinity();
}

BlowUpTime blow_up_time(const Coefficients& k) {
  const CaseInfo info = classify(k);
  switch (info.kind) {
    case Case::linear_constant:
    case Case::linear_exponential:
    case Case::trivial:
      return BlowUpTime::infinite();
    case Case::double_root:
      return BlowUpTime::finite(2.0 / k.b);
    case Case::real_roots: {
      const double s = std::sqrt(info.delta);
      // ln((b + s) / (b - s)) / s, with b - s = 4ac / (b + s).
      return BlowUpTime::finite(std::log1p(2.0 * s * (k.b + s) / (4.0 * k.a * k.c)) / s);
    }
    case Case::tangent_pure:
    case Case::complex_roots:
      return BlowUpTime::finite(2.0 * std::atan2(info.omega, k.b) / info.omega);
  }
  return BlowUpTime::infinite();
}

double evaluate(const Coefficients& k, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("riccati::evaluate: t must be nonnegative");
  const CaseInfo info = classify(k);
  const BlowUpTime t_star = blow_up_time(k);
  if (!t_star.exceeds(t)) throw BlowUpDomain(t, t_star.value_or_infinity());
  if (t == 0.0) return 0.0;

  switch (info.kind) {
    case Case::trivial:
      return 0.0;
    case Case::linear_constant:
      return k.c * t;
    case Case::linear_exponential:
      return k.c / k.b * std::expm1(k.b * t);
    case Case::double_root:
      return 2.0 * k.c * t / (2.0 - k.b * t);
    case Case::real_roots: {
      const double s = std::sqrt(info.delta);
      const double em1 = std::expm1(s * t);
      return 2.0 * k.c * em1 / (2.0 * s * (em1 + 1.0) - (k.b + s) * em1);
    }
    case Case::tangent_pure:
    case Case::complex_roots: {
      const double tn = std::tan(0.5 * info.omega * t);
      return 2.0 * k.c * tn / (info.omega - k.b * tn);
    }
  }
  return 0.0;
}

namespace {

double rk4_step(const Coefficients& k, double y, double h) {
  auto f = [&](double v) { return (k.a * v + k.b) * v + k.c; };
  const double k1 = f(y);
  const double k2 = f(y + 0.5 * h * k1);
  const double k3 = f(y + 0.5 * h * k2);
  const double k4 = f(y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double numeric_oracle(const Coefficients& k, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("riccati::numeric_oracle: t must be nonnegative");
  classify(k);
  const BlowUpTime t_star = blow_up_time(k);
  if (t_star.is_finite() && t >= 0.95 * t_star.value_or_infinity()) {
    throw OracleRange("numeric oracle requested at t = " + std::to_string(t) +
                      ", too close to the blow-up time " +
                      std::to_string(t_star.value_or_infinity()));
  }
  if (t == 0.0) return 0.0;

  constexpr double kTol = 1e-10;
  constexpr long kMaxSteps = 2'000'000;
  double y = 0.0, s = 0.0, h = t / 64.0;
  for (long step = 0; step < kMaxSteps; ++step) {
    if (s >= t) return y;
    const bool last = s + h >= t;
    const double hh = last ? t - s : h;
    const double full = rk4_step(k, y, hh);
    const double half = rk4_step(k, rk4_step(k, y, 0.5 * hh), 0.5 * hh);
    const double err = std::abs(half - full) / 15.0;
    const double scale = kTol * std::max(std::abs(half), std::abs(half - y));
    if (err <= scale || hh < 1e-14 * t) {
      y = half + (half - full) / 15.0;
      s = last ? t : s + hh;
    }
    const double ratio = err == 0.0 ? 4.0 : 0.9 * std::pow(scale / err, 0.2);
    h = hh * std::clamp(ratio, 0.1, 4.0);
  }
  throw OracleRange("numeric oracle exceeded its step budget");
}

EnvelopeReport envelope_check(std::span<const double> times, std::span<const double> measured,
                              const Coefficients& k) {
  if (times.size() != measured.size()) {
    throw DimensionMismatch("envelope_check: times and measured values differ in length");
  }
  const BlowUpTime t_star = blow_up_time(k);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!t_star.exceeds(times[i])) {
      throw EnvelopeNotApplicable(i, times[i], t_star.value_or_infinity());
    }
  }
  EnvelopeReport rep;
  rep.pass = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double y = evaluate(k, times[i]);
    rep.envelope.push_back(y);
    rep.margins.push_back(y - measured[i]);
    if (!(measured[i] <= y * (1.0 + 1e-9) + 1e-14)) {
      rep.pass = false;
      if (!rep.first_violation) rep.first_violation = i;
    }
  }
  return rep;
}

}  // namespace csbp::riccati
