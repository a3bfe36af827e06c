#pragma once

#include <cstddef>
#include <vector>

#include "csbp/discretization.hpp"
#include "csbp/flux_models.hpp"
#include "csbp/sbp_core.hpp"

namespace csbp {

/// Exact-solution data at one time: u, u_x, tau (scheme residual) and tau_u = D u - u_x.
struct ExactSnapshot {
  double t = 0.0;
  StateVector u;
  StateVector u_x;
  StateVector tau;
  StateVector tau_u;
};

ExactSnapshot exact_snapshot(const GlobalOperator& gop, const FluxModel& model,
                             const ExactSolution& exact, double t);

/// Flux Jacobian differences A(u_j) - A(u_i) over node pairs sharing an element.
struct JacobianDifference {
  double entry_max = 0.0;    ///< max entry magnitude, |A*|_inf
  double row_sum_max = 0.0;  ///< max over elements of the induced inf-norm of the block matrix A*_k
};

JacobianDifference flux_jacobian_difference(const FluxModel& model, const StateVector& u,
                                            const GlobalOperator& gop);
/// |A*|_inf.
double flux_jacobian_difference_sup(const FluxModel& model, const StateVector& u,
                                    const GlobalOperator& gop);

struct BoundIngredients {
  double jacobian_difference = 0.0;  ///< |A*|_inf (entrywise)
  double jacobian_difference_norm = 0.0;  ///< block row-sum norm, used for systems
  double q_star = 0.0;      ///< max_k ||Q_k||_2
  double q_hat_star = 0.0;  ///< max_k ||Q_k (x) ones(n_c)||_2
  double c_r = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  int n_p = 0;
  int n_c = 0;
  double u_x_inf = 0.0;
  double tau_u_inf = 0.0;
  double tau_inf = 0.0;  ///< ||tau_*||_inf
};

struct BoundConstants {
  double c_f = 0.0;
  double c_r = 0.0;  ///< c_R = (c_r / 2) ||Q_*||_2
  double c_s = 0.0;
  /// sup over samples of w_min^{-1} (alpha1 c_F + alpha2 c_S).
  double growth_sup = 0.0;
  /// Time-dependent ingredients hold their sup over the samples.
  BoundIngredients ingredients;
  double h = 0.0;
  int elements = 0;
  int degree = 0;
  double domain_length = 0.0;
  std::size_t time_samples = 0;
};

/// Constants evaluated at a single exact-solution snapshot.
BoundConstants snapshot_constants(const GlobalOperator& gop, const FluxModel& model,
                                  const ExactSnapshot& snap);

/// Constants with time-dependent ingredients maximized over `t_samples`.
BoundConstants bound_constants(const GlobalOperator& gop, const FluxModel& model,
                               const ExactSolution& exact, const std::vector<double>& t_samples);

/// `count` uniform times covering [0, final_time] (count >= 2).
std::vector<double> uniform_times(double final_time, std::size_t count);

struct RiccatiCoefficients {
  double a = 0.0;
  double b = 0.0;       ///< supremum over the whole mesh family
  double b_mesh = 0.0;  ///< this mesh's own growth term, before the family supremum
  double c = 0.0;
  double delta = 0.0;   ///< b^2 - 4ac
  double h = 0.0;
  int elements = 0;
  int dimension = 1;
  std::size_t time_samples = 0;
};

/// a, b, c for each mesh of a family; b is shared across the family.
std::vector<RiccatiCoefficients> riccati_coefficients(const std::vector<BoundConstants>& family,
                                                      const FluxModel& model);

struct TermCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct TermReport {
  TermCheck term1;  ///< |e^T Q A(u) e| <= c_F ||e||_2^2
  TermCheck term2;  ///< |e^T Q R_1(e)| <= c_R ||e||_2^3
  TermCheck term3;  ///< split-form term <= c_S ||e||_2^2 + 2 c_R ||e||_2^3
  TermCheck term4;  ///< |e^T H tau| <= ||tau||_H ||e||_H
  /// e^T Q A(u) e and 1/2 sum_k e_k^T (Q_k o A*_k) e_k.
  double hadamard_lhs = 0.0;
  double hadamard_rhs = 0.0;
  double e_norm2 = 0.0;  ///< element-summed 2-norm (shared nodes counted per element)
  double e_norm_h = 0.0;
  BoundConstants constants;

  bool all_pass() const { return term1.pass && term2.pass && term3.pass && term4.pass; }
};

TermReport term_inequality_report(const GlobalOperator& gop, const FluxModel& model,
                                  const ExactSnapshot& snap, const StateVector& e);

/// sum_k ||e_k||_2^2, counting shared nodes once per element.
double element_norm2_squared(const GlobalOperator& gop, const StateVector& e);

}  // namespace csbp
