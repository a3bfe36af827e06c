#include "csbp/error_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "csbp/errors.hpp"

namespace csbp {

namespace {

// Time-independent operator norms used by every snapshot.
struct OperatorNorms {
  double q_star = 0.0;
  double q_hat_star = 0.0;
};

OperatorNorms operator_norms(const GlobalOperator& gop, int components) {
  OperatorNorms n;
  n.q_star = gop.q_star_norm();
  if (components == 1) {
    n.q_hat_star = n.q_star;
    return n;
  }
  const DenseMatrix ones = DenseMatrix::Ones(components, components);
  for (int k = 0; k < gop.mesh().num_elements(); ++k) {
    const DenseMatrix qk = gop.element_q(k);
    DenseMatrix q_hat(qk.rows() * components, qk.cols() * components);
    for (Eigen::Index i = 0; i < qk.rows(); ++i) {
      for (Eigen::Index j = 0; j < qk.cols(); ++j) {
        q_hat.block(i * components, j * components, components, components) = qk(i, j) * ones;
      }
    }
    n.q_hat_star = std::max(n.q_hat_star, two_norm(q_hat));
  }
  return n;
}

BoundConstants constants_from(const GlobalOperator& gop, const FluxModel& model,
                              const ExactSnapshot& snap, const OperatorNorms& norms) {
  const int np = gop.nodes_per_element();
  const int nc = model.components();
  BoundConstants bc;
  auto& in = bc.ingredients;
  const JacobianDifference jd = flux_jacobian_difference(model, snap.u, gop);
  in.jacobian_difference = jd.entry_max;
  in.jacobian_difference_norm = jd.row_sum_max;
  in.q_star = norms.q_star;
  in.q_hat_star = norms.q_hat_star;
  in.c_r = model.hessian_bound();
  in.w_min = gop.w_min();
  in.w_max = gop.w_max();
  in.n_p = np;
  in.n_c = nc;
  for (double v : snap.u_x.data) in.u_x_inf = std::max(in.u_x_inf, std::abs(v));
  for (double v : snap.tau_u.data) in.tau_u_inf = std::max(in.tau_u_inf, std::abs(v));
  for (double v : snap.tau.data) in.tau_inf = std::max(in.tau_inf, std::abs(v));

  if (nc == 1) {
    bc.c_f = 0.5 * std::pow(np, 1.5) * in.jacobian_difference * in.q_star;
  } else {
    bc.c_f = 0.5 * std::sqrt(static_cast<double>(np * nc)) * in.jacobian_difference_norm *
             in.q_hat_star;
  }
  bc.c_r = 0.5 * in.c_r * in.q_star;
  bc.c_s = bc.c_f + in.c_r * (std::pow(in.w_max, 1.5) / std::sqrt(in.w_min)) *
                        std::sqrt(static_cast<double>(np * nc)) * (in.u_x_inf + in.tau_u_inf);
  bc.growth_sup = (model.alpha1() * bc.c_f + model.alpha2() * bc.c_s) / in.w_min;
  bc.h = gop.mesh().h();
  bc.elements = gop.mesh().num_elements();
  bc.degree = gop.reference().degree;
  bc.domain_length = gop.mesh().length();
  bc.time_samples = 1;
  return bc;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// out_i = A(u_i) v_i, node by node.
StateVector apply_jacobian(const FluxModel& model, const StateVector& u, const StateVector& v) {
  const auto nc = static_cast<std::size_t>(model.components());
  StateVector out(u.nodes, model.components());
  std::vector<double> a(nc * nc);
  for (std::size_t i = 0; i < u.nodes; ++i) {
    model.jacobian(u.node(i), a);
    for (std::size_t r = 0; r < nc; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < nc; ++c) s += a[r * nc + c] * v.data[i * nc + c];
      out.data[i * nc + r] = s;
    }
  }
  return out;
}

bool within(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-12); }

}  // namespace

ExactSnapshot exact_snapshot(const GlobalOperator& gop, const FluxModel& model,
                             const ExactSolution& exact, double t) {
  ExactSnapshot s;
  s.t = t;
  s.u = sample_exact(gop, exact, t);
  check_shape(gop, model, s.u);
  s.u_x = sample_exact_dx(gop, exact, t);
  s.tau = truncation_error(gop, model, exact, t).tau;
  s.tau_u = StateVector(s.u.nodes, s.u.components);
  gop.apply_d(s.u.data, s.tau_u.data, s.u.components);
  for (std::size_t i = 0; i < s.tau_u.data.size(); ++i) s.tau_u.data[i] -= s.u_x.data[i];
  return s;
}

JacobianDifference flux_jacobian_difference(const FluxModel& model, const StateVector& u,
                                            const GlobalOperator& gop) {
  check_shape(gop, model, u);
  const int np = gop.nodes_per_element();
  const auto nc = static_cast<std::size_t>(model.components());
  const auto& mesh = gop.mesh();
  std::vector<std::vector<double>> a(np, std::vector<double>(nc * nc));
  JacobianDifference jd;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    for (int j = 0; j < np; ++j) model.jacobian(u.node(mesh.global_index(k, j)), a[j]);
    for (int i = 0; i < np; ++i) {
      for (std::size_t r = 0; r < nc; ++r) {
        double row = 0.0;
        for (int j = 0; j < np; ++j) {
          for (std::size_t c = 0; c < nc; ++c) {
            const double d = std::abs(a[j][r * nc + c] - a[i][r * nc + c]);
            jd.entry_max = std::max(jd.entry_max, d);
            row += d;
          }
        }
        jd.row_sum_max = std::max(jd.row_sum_max, row);
      }
    }
  }
  return jd;
}

double flux_jacobian_difference_sup(const FluxModel& model, const StateVector& u,
                                    const GlobalOperator& gop) {
  return flux_jacobian_difference(model, u, gop).entry_max;
}

BoundConstants snapshot_constants(const GlobalOperator& gop, const FluxModel& model,
                                  const ExactSnapshot& snap) {
  return constants_from(gop, model, snap, operator_norms(gop, model.components()));
}

BoundConstants bound_constants(const GlobalOperator& gop, const FluxModel& model,
                               const ExactSolution& exact, const std::vector<double>& t_samples) {
  if (t_samples.empty()) {
    throw InvalidArgument("bound_constants: empty time-sample set");
  }
  const OperatorNorms norms = operator_norms(gop, model.components());
  BoundConstants sup;
  bool first = true;
  for (double t : t_samples) {
    const BoundConstants bc = constants_from(gop, model, exact_snapshot(gop, model, exact, t), norms);
    if (first) {
      sup = bc;
      first = false;
      continue;
    }
    sup.c_f = std::max(sup.c_f, bc.c_f);
    sup.c_r = std::max(sup.c_r, bc.c_r);
    sup.c_s = std::max(sup.c_s, bc.c_s);
    sup.growth_sup = std::max(sup.growth_sup, bc.growth_sup);
    auto& s = sup.ingredients;
    const auto& b = bc.ingredients;
    s.jacobian_difference = std::max(s.jacobian_difference, b.jacobian_difference);
    s.jacobian_difference_norm = std::max(s.jacobian_difference_norm, b.jacobian_difference_norm);
    s.u_x_inf = std::max(s.u_x_inf, b.u_x_inf);
    s.tau_u_inf = std::max(s.tau_u_inf, b.tau_u_inf);
    s.tau_inf = std::max(s.tau_inf, b.tau_inf);
  }
  sup.time_samples = t_samples.size();
  return sup;
}

std::vector<double> uniform_times(double final_time, std::size_t count) {
  if (count < 2) throw InvalidArgument("uniform_times: need at least 2 samples");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) {
    t[i] = final_time * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return t;
}

std::vector<RiccatiCoefficients> riccati_coefficients(const std::vector<BoundConstants>& family,
                                                      const FluxModel& model) {
  std::vector<RiccatiCoefficients> out;
  double b_family = 0.0;
  for (const auto& bc : family) b_family = std::max(b_family, bc.growth_sup);
  for (const auto& bc : family) {
    RiccatiCoefficients rc;
    const double w_min = bc.ingredients.w_min;
    rc.a = (model.alpha1() + 2.0 * model.alpha2()) * bc.c_r / std::pow(w_min, 1.5);
    rc.b_mesh = bc.growth_sup;
    rc.b = b_family;
    rc.c = std::sqrt(bc.domain_length) * bc.ingredients.tau_inf;
    rc.delta = rc.b * rc.b - 4.0 * rc.a * rc.c;
    rc.h = bc.h;
    rc.elements = bc.elements;
    rc.time_samples = bc.time_samples;
    out.push_back(rc);
  }
  return out;
}

double element_norm2_squared(const GlobalOperator& gop, const StateVector& e) {
  const auto& mesh = gop.mesh();
  double s = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    for (int j = 0; j < gop.nodes_per_element(); ++j) {
      for (double v : e.node(mesh.global_index(k, j))) s += v * v;
    }
  }
  return s;
}

TermReport term_inequality_report(const GlobalOperator& gop, const FluxModel& model,
                                  const ExactSnapshot& snap, const StateVector& e) {
  check_shape(gop, model, snap.u);
  check_shape(gop, model, e);
  const int nc = model.components();
  const auto ncs = static_cast<std::size_t>(nc);
  const std::size_t n = e.size();

  TermReport rep;
  rep.constants = snapshot_constants(gop, model, snap);
  const auto& bc = rep.constants;
  const double e2sq = element_norm2_squared(gop, e);
  rep.e_norm2 = std::sqrt(e2sq);
  rep.e_norm_h = h_norm(gop, e);

  StateVector uh(snap.u.nodes, nc);
  for (std::size_t i = 0; i < n; ++i) uh.data[i] = snap.u.data[i] - e.data[i];

  std::vector<double> tmp(n);

  // Term I and its Hadamard rewriting. Both sides cancel heavily for some e,
  // so they are accumulated in extended precision.
  const auto& mesh = gop.mesh();
  const int np = gop.nodes_per_element();
  {
    std::vector<double> a(ncs * ncs);
    std::vector<std::vector<double>> jac(snap.u.nodes);
    for (std::size_t i = 0; i < snap.u.nodes; ++i) {
      model.jacobian(snap.u.node(i), a);
      jac[i] = a;
    }
    long double acc = 0.0L;
    const auto& q = gop.q();
    for (Eigen::Index i = 0; i < q.outerSize(); ++i) {
      const auto ei = e.node(static_cast<std::size_t>(i));
      for (SparseMatrix::InnerIterator it(q, i); it; ++it) {
        const auto j = static_cast<std::size_t>(it.col());
        const auto ej = e.node(j);
        for (std::size_t r = 0; r < ncs; ++r) {
          for (std::size_t c = 0; c < ncs; ++c) {
            acc += static_cast<long double>(ei[r]) * it.value() * jac[j][r * ncs + c] * ej[c];
          }
        }
      }
    }
    rep.hadamard_lhs = static_cast<double>(acc);
  }
  {
    std::vector<std::vector<double>> a(np, std::vector<double>(ncs * ncs));
    long double acc = 0.0L;
    for (int k = 0; k < mesh.num_elements(); ++k) {
      const DenseMatrix qk = gop.element_q(k);
      for (int j = 0; j < np; ++j) model.jacobian(snap.u.node(mesh.global_index(k, j)), a[j]);
      for (int i = 0; i < np; ++i) {
        const auto ei = e.node(mesh.global_index(k, i));
        for (int j = 0; j < np; ++j) {
          const auto ej = e.node(mesh.global_index(k, j));
          long double quad = 0.0L;
          for (std::size_t r = 0; r < ncs; ++r) {
            for (std::size_t c = 0; c < ncs; ++c) {
              quad += static_cast<long double>(ei[r]) *
                      (static_cast<long double>(a[j][r * ncs + c]) - a[i][r * ncs + c]) * ej[c];
            }
          }
          acc += qk(i, j) * quad;
        }
      }
    }
    rep.hadamard_rhs = static_cast<double>(0.5L * acc);
  }
  rep.term1.lhs = std::abs(rep.hadamard_lhs);
  rep.term1.rhs = bc.c_f * e2sq;
  rep.term1.pass = within(rep.term1.lhs, rep.term1.rhs);

  // Term II.
  const RemainderReport rem = taylor_remainder(model, snap.u.data, uh.data);
  gop.apply_q(rem.remainder, tmp, nc);
  rep.term2.lhs = std::abs(dot(e.data, tmp));
  rep.term2.rhs = bc.c_r * e2sq * rep.e_norm2;
  rep.term2.pass = within(rep.term2.lhs, rep.term2.rhs);

  // Term III: e^T A(u) Q u - e^T A(u_h) Q u_h.
  std::vector<double> qu(n), quh(n);
  gop.apply_q(snap.u.data, qu, nc);
  gop.apply_q(uh.data, quh, nc);
  StateVector qu_sv(snap.u.nodes, nc), quh_sv(snap.u.nodes, nc);
  qu_sv.data = qu;
  quh_sv.data = quh;
  const StateVector a_qu = apply_jacobian(model, snap.u, qu_sv);
  const StateVector ah_quh = apply_jacobian(model, uh, quh_sv);
  rep.term3.lhs = std::abs(dot(e.data, a_qu.data) - dot(e.data, ah_quh.data));
  rep.term3.rhs = bc.c_s * e2sq + 2.0 * bc.c_r * e2sq * rep.e_norm2;
  rep.term3.pass = within(rep.term3.lhs, rep.term3.rhs);

  // Term IV.
  const auto& hd = gop.h_diag();
  double eht = 0.0;
  for (std::size_t i = 0; i < snap.u.nodes; ++i) {
    for (std::size_t c = 0; c < ncs; ++c) {
      eht += e.data[i * ncs + c] * hd(static_cast<Eigen::Index>(i)) * snap.tau.data[i * ncs + c];
    }
  }
  rep.term4.lhs = std::abs(eht);
  rep.term4.rhs = h_norm(gop, snap.tau) * rep.e_norm_h;
  rep.term4.pass = within(rep.term4.lhs, rep.term4.rhs);
  return rep;
}

}  // namespace csbp
