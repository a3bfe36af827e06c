#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "csbp/flux_models.hpp"
#include "csbp/sbp_core.hpp"

namespace csbp {

/// Global nodal values, component-fastest: value(node, c) = data[node * components + c].
struct StateVector {
  std::size_t nodes = 0;
  int components = 1;
  std::vector<double> data;

  StateVector() = default;
  StateVector(std::size_t nodes, int components, double fill = 0.0)
      : nodes(nodes), components(components), data(nodes * components, fill) {}

  double& operator()(std::size_t node, int c) { return data[node * components + c]; }
  double operator()(std::size_t node, int c) const { return data[node * components + c]; }
  std::span<double> node(std::size_t i) { return {data.data() + i * components, static_cast<std::size_t>(components)}; }
  std::span<const double> node(std::size_t i) const {
    return {data.data() + i * components, static_cast<std::size_t>(components)};
  }
  std::size_t size() const { return data.size(); }
};

/// Throws DimensionMismatch unless `u` matches the operator's node count and the model's components.
void check_shape(const GlobalOperator& gop, const FluxModel& model, const StateVector& u);

/// Nodal samples of the exact solution at time t.
StateVector sample_exact(const GlobalOperator& gop, const ExactSolution& exact, double t);
StateVector sample_exact_dx(const GlobalOperator& gop, const ExactSolution& exact, double t);

/// Split-form right-hand side -alpha1 D f(u) - alpha2 A(u) D u.
StateVector split_rhs(const GlobalOperator& gop, const FluxModel& model, const StateVector& u);

/// u^T H u with the block norm for systems.
double discrete_energy(const GlobalOperator& gop, const StateVector& u);
inline double h_norm(const GlobalOperator& gop, const StateVector& u) {
  return std::sqrt(discrete_energy(gop, u));
}

struct Trajectory {
  std::vector<double> times;          ///< sample times, strictly increasing
  std::vector<StateVector> states;    ///< states at the sample times
  std::vector<double> step_times;     ///< t after every step, starting with 0
  std::vector<double> step_energies;  ///< discrete energy after every step
};

struct IntegrationOptions {
  double cfl = 0.2;
  /// Extra times at which to store the state; the final time is always stored,
  /// and so is t = 0. Steps are shortened to land on each of them.
  std::vector<double> sample_times;
};

/// Largest dt admitted by dt <= cfl * h / max|lambda(A(u))|.
double cfl_time_step(const GlobalOperator& gop, const FluxModel& model, const StateVector& u,
                     double cfl);

/// Classical RK4 from t = 0 to t = final_time.
Trajectory rk4_integrate(const GlobalOperator& gop, const FluxModel& model, const StateVector& u0,
                         double final_time, double dt, const IntegrationOptions& options = {});

struct TruncationError {
  StateVector tau;
  double norm_h = 0.0;    ///< ||tau||_H
  double norm_inf = 0.0;  ///< max over elements of ||tau_k||_inf
  bool norm_relation_holds = false;  ///< ||tau||_H <= sqrt(|Omega|) ||tau_*||_inf
};

/// tau = du/dt + alpha1 D f(u) + alpha2 A(u) D u with du/dt = -A(u) u_x from the exact solution.
TruncationError truncation_error(const GlobalOperator& gop, const FluxModel& model,
                                 const ExactSolution& exact, double t);

}  // namespace csbp
