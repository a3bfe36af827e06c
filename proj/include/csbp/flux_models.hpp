#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csbp {

/// Homogeneous flux with symmetric Jacobian.
///
/// `burgers`:    F(u) = u^2 / 2, A(u) = u.
/// `symmetric2`: F(u1, u2) = ((u1^2 + u2^2) / 2, u1 u2), A = [[u1, u2], [u2, u1]].
///
/// Both are degree-2 homogeneous, so A(U) U = 2 F(U) and the split coefficients are
/// alpha1 = beta / (beta + 1) = 2/3 and alpha2 = 1 / (beta + 1) = 1/3.
class FluxModel {
 public:
  enum class Kind { burgers, symmetric2 };

  static FluxModel burgers();
  static FluxModel symmetric2();
  /// "burgers" | "symmetric2"; throws InvalidArgument otherwise.
  static FluxModel from_name(std::string_view name);

  Kind kind() const { return kind_; }
  std::string_view name() const;
  int components() const { return components_; }
  double degree() const { return beta_; }
  /// c_r: global bound on the flux Hessian, used in every remainder estimate.
  double hessian_bound() const { return hessian_bound_; }
  double alpha1() const { return beta_ / (beta_ + 1.0); }
  double alpha2() const { return 1.0 / (beta_ + 1.0); }

  /// Copy with a different c_r (e.g. 0 to emulate a linear flux in coefficient tests).
  FluxModel with_hessian_bound(double c_r) const;

  void flux(std::span<const double> u, std::span<double> f) const;
  /// Row-major n_c x n_c Jacobian.
  void jacobian(std::span<const double> u, std::span<double> a) const;
  /// Largest |eigenvalue| of A(u).
  double max_wave_speed(std::span<const double> u) const;

 private:
  FluxModel(Kind kind, int components, double beta, double c_r)
      : kind_(kind), components_(components), beta_(beta), hessian_bound_(c_r) {}

  Kind kind_;
  int components_;
  double beta_;
  double hessian_bound_;
};

struct HomogeneityReport {
  double scaling_residual = 0.0;  ///< max |F(eta U) - eta^beta F(U)|
  double euler_residual = 0.0;    ///< max |A(U) U - beta F(U)|
  bool pass = false;
};

/// Residuals of the homogeneity and Euler identities at a single state.
HomogeneityReport check_homogeneity(const FluxModel& model, std::span<const double> u,
                                    double eta);

struct RemainderReport {
  std::vector<double> remainder;  ///< R_1 = f(u_h) - f(u) + A(u)(u - u_h), node-interleaved
  double remainder_norm = 0.0;    ///< ||R_1||_2
  double bound = 0.0;             ///< (c_r / 2) ||u - u_h||_2^2
  bool holds = false;
};

/// First-order Taylor remainder of the flux, for node-interleaved state vectors.
RemainderReport taylor_remainder(const FluxModel& model, std::span<const double> u,
                                 std::span<const double> u_h);

/// Pre-shock solution of u_t + (u^2/2)_x = 0 on a periodic unit interval with
/// u0(x) = amplitude * sin(2 pi m (x + shift)).
class SineCharacteristics {
 public:
  SineCharacteristics(double amplitude, int wavenumber = 1, double shift = 0.0);

  double amplitude() const { return amplitude_; }
  int wavenumber() const { return wavenumber_; }
  double breaking_time() const;

  double initial(double x) const;
  double initial_dx(double x) const;
  /// Foot of the characteristic through (x, t): xi = x - u0(xi) t.
  double foot(double x, double t) const;
  double value(double x, double t) const;
  /// du/dx = u0'(xi) / (1 + u0'(xi) t).
  double dx(double x, double t) const;

 private:
  double amplitude_;
  int wavenumber_;
  double shift_;
};

/// u(x, t) of Burgers with u0 = sigma sin(2 pi x). Throws PostBreaking for t >= 1/(2 pi sigma).
double burgers_exact(double sigma, double x, double t);

/// Smooth reference solution for a flux model.
class ExactSolution {
 public:
  /// Burgers with u0 = sigma sin(2 pi m x).
  static ExactSolution burgers(double sigma, int wavenumber = 1);
  /// symmetric2 with u1 = sigma sin(2 pi m x), u2 = (sigma/2) cos(2 pi m x); solved
  /// through s = u1 + u2 and w = u1 - u2, each a Burgers solution.
  static ExactSolution symmetric2(double sigma, int wavenumber = 1);
  /// Time-independent state.
  static ExactSolution constant(std::vector<double> state);
  /// The default problem for a model name.
  static ExactSolution for_model(const FluxModel& model, double sigma, int wavenumber = 1);

  int components() const;
  /// +infinity for constant states.
  double breaking_time() const;

  void state(double x, double t, std::span<double> out) const;
  void state_dx(double x, double t, std::span<double> out) const;

 private:
  enum class Kind { burgers, symmetric2, constant };
  ExactSolution(Kind kind, std::vector<SineCharacteristics> waves, std::vector<double> state);
  void check_time(double t) const;

  Kind kind_;
  std::vector<SineCharacteristics> waves_;
  std::vector<double> constant_;
};

}  // namespace csbp
