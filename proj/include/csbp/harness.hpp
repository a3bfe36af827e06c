#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csbp/error_bounds.hpp"
#include "csbp/fit.hpp"
#include "csbp/riccati.hpp"

namespace csbp {

struct StudyConfig {
  std::string problem = "burgers";
  int degree = 3;
  std::vector<int> meshes{16, 32, 64, 128};
  double sigma = 1.0;
  int wavenumber = 1;
  double final_time_fraction = 0.5;  ///< T = fraction * T_b
  std::optional<double> dt;          ///< fixed step; otherwise from the CFL number
  double cfl = 0.2;
  int time_samples = 21;      ///< samples over [0, T] for the bound-constant suprema
  int envelope_samples = 50;  ///< uniform envelope samples in (0, T]
  std::string output_dir;     ///< empty: write nothing
  std::string study = "convergence";
  bool dt_halving_check = true;
  double min_order_offset = 0.3;  ///< convergence order must reach p - offset

  /// Throws InvalidArgument on an unknown key or an inconsistent value.
  static StudyConfig from_json_text(std::string_view text);
  static StudyConfig from_file(const std::string& path);
  std::string to_json_text() const;

  /// Mesh list strictly increasing, >= min_levels entries, fraction in (0, 1).
  void validate(std::size_t min_levels) const;
  double breaking_time() const;
  double final_time() const { return final_time_fraction * breaking_time(); }
};

enum class EnvelopeStatus { pass, fail, not_applicable };
std::string_view envelope_status_name(EnvelopeStatus s);

struct ConvergenceRow {
  double h = 0.0;
  int elements = 0;
  int degree = 0;
  double dt = 0.0;
  std::size_t steps = 0;
  double error_h = 0.0;  ///< ||e(T)||_H
  double tau_inf = 0.0;  ///< sup over samples of ||tau_*||_inf
  BoundConstants constants;
  RiccatiCoefficients coefficients;
  riccati::BlowUpTime t_star = riccati::BlowUpTime::infinite();
  EnvelopeStatus envelope = EnvelopeStatus::not_applicable;
  /// Envelope comparison restricted to the samples with t_i < t*.
  std::size_t samples_below_t_star = 0;
  bool partial_envelope_pass = true;
  /// Relative change of the b and c suprema when the time samples are doubled.
  double sup_refinement_change = 0.0;
  double max_margin = 0.0;  ///< over compared samples; NaN when none were compared
  double min_margin = 0.0;
  std::vector<double> sample_times;
  std::vector<double> sample_errors;
};

struct DtHalvingCheck {
  double error = 0.0;
  double error_halved = 0.0;
  double relative_change = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  StudyConfig config;
  std::vector<ConvergenceRow> rows;
  OrderFit error_order;
  OrderFit tau_order;
  bool strictly_decreasing = false;
  bool order_ok = false;
  bool envelope_ok = false;  ///< no failing mesh among the applicable ones
  bool t_star_nondecreasing = false;
  bool sup_sampling_ok = false;  ///< doubled time samples move the suprema by < 1%
  std::optional<DtHalvingCheck> dt_halving;

  bool all_pass() const;
};

ConvergenceReport run_convergence_study(const StudyConfig& config);

struct ScalingRow {
  double h = 0.0;
  int elements = 0;
  double a = 0.0;
  double b = 0.0;  ///< this mesh's own growth term
  double c = 0.0;
  double jacobian_difference = 0.0;
  double h_norm = 0.0;
  double q_norm = 0.0;
  double d_norm = 0.0;
  riccati::BlowUpTime t_star = riccati::BlowUpTime::infinite();
};

struct ScalingReport {
  StudyConfig config;
  std::vector<ScalingRow> rows;
  OrderFit a_slope;
  OrderFit b_slope;
  OrderFit b_family_slope;  ///< the family supremum, constant by construction
  OrderFit c_slope;
  OrderFit ac_slope;
  OrderFit jacobian_difference_slope;
  OrderFit h_slope;
  OrderFit q_slope;
  OrderFit d_slope;
  bool t_star_nondecreasing = false;
  /// Slope of t* against log(1/h) over the finite entries; NaN if fewer than 2.
  double t_star_log_trend = 0.0;

  bool all_pass() const;
};

/// Needs at least 4 mesh levels.
ScalingReport run_scaling_study(const StudyConfig& config);

struct SimulationResult {
  double h = 0.0;
  double dt = 0.0;
  double final_time = 0.0;
  std::vector<double> step_times;
  std::vector<double> step_energies;
  double relative_drift = 0.0;  ///< max_n |E_n - E_0| / E_0
  double error_h = 0.0;
};

/// Single run on the first mesh of the config.
SimulationResult run_simulation(const StudyConfig& config);

/// Writes report.csv, bounds.csv and summary.json into config.output_dir.
void write_convergence_outputs(const ConvergenceReport& report);
void write_scaling_outputs(const ScalingReport& report);

std::string convergence_csv(const ConvergenceReport& report);
std::string bounds_csv(const ConvergenceReport& report);
std::string convergence_summary_json(const ConvergenceReport& report);
std::string scaling_csv(const ScalingReport& report);
std::string scaling_summary_json(const ScalingReport& report);

}  // namespace csbp
