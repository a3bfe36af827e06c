#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace csbp::riccati {

/// y' = a y^2 + b y + c, y(0) = 0, with a, b, c >= 0.
struct Coefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

enum class Case {
  linear_constant,
  linear_exponential,
  tangent_pure,
  real_roots,
  double_root,
  complex_roots,
  trivial,
};

std::string_view case_name(Case c);

/// Classification plus the quantities each case needs.
struct CaseInfo {
  Case kind = Case::trivial;
  double delta = 0.0;  ///< b^2 - 4ac
  double r1 = 0.0;     ///< real_roots / double_root: larger root
  double r2 = 0.0;     ///< real_roots: smaller root
  double omega = 0.0;  ///< complex_roots / tangent_pure: sqrt(-delta)
  double alpha = 0.0;  ///< complex_roots: real part -b/(2a)
  double beta = 0.0;   ///< complex_roots: imaginary part omega/(2a)
};

inline constexpr double kDeltaTolerance = 1e-10;

/// Throws InvalidCoefficient on a negative or non-finite coefficient.
CaseInfo classify(const Coefficients& k);

class BlowUpTime {
 public:
  static BlowUpTime finite(double t) { return BlowUpTime(t); }
  static BlowUpTime infinite() { return BlowUpTime(std::nullopt); }

  bool is_finite() const { return t_.has_value(); }
  /// Finite value; +inf when there is no blow-up.
  double value_or_infinity() const;
  bool exceeds(double t) const { return !t_ || *t_ > t; }

 private:
  explicit BlowUpTime(std::optional<double> t) : t_(t) {}
  std::optional<double> t_;
};

BlowUpTime blow_up_time(const Coefficients& k);

/// Closed-form y(t). Throws BlowUpDomain for t >= t*.
double evaluate(const Coefficients& k, double t);

/// Adaptive step-doubling RK4 reference solution. Throws OracleRange
/// beyond 0.95 t* or when the step budget runs out.
double numeric_oracle(const Coefficients& k, double t);

struct EnvelopeReport {
  bool pass = false;
  std::vector<double> envelope;  ///< y(t_i)
  std::vector<double> margins;   ///< y(t_i) - z_i
  std::optional<std::size_t> first_violation;
};

/// Compares measured z_i = ||e(t_i)||_H with y(t_i). Throws EnvelopeNotApplicable
/// if some t_i >= t*.
EnvelopeReport envelope_check(std::span<const double> times, std::span<const double> measured,
                              const Coefficients& k);

}  // namespace csbp::riccati
