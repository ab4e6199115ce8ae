#ifndef EXRISK_BOUNDS_HPP
#define EXRISK_BOUNDS_HPP

#include "exrisk/measures.hpp"
#include "exrisk/tabulated.hpp"

namespace exrisk {

/// Scalar knobs shared by the excess-risk bounds.
struct BoundParams {
  double t = 2.0;        // exponential tail level
  double q = 2.0;        // peeling ratio
  double eps = 0.25;     // 0 < eps < 1/q
  double eps_bar = 0.6;  // Bousquet slack
  Index n = 200;
  double eta_n = 1.0;    // scale in the unbounded-loss condition

  /// Throws unless t > 0, q > 1, 0 < eps < 1/q, eps_bar > 0, n >= 1, eta_n > 0.
  void validate() const;
};

/// log_q(q/delta) e^{-t}, clipped to [0, 1]; `vacuous` when clipping bit.
struct TailBound {
  double prob = 1.0;
  double unclipped = kInfinity;
  bool vacuous = true;
};

TailBound peeling_tail(double q, double delta, double t);

struct ExcessRiskBound {
  double delta_tn = kInfinity;
  double tail_prob = 1.0;
  bool vacuous = true;
  double H_value = 0.0;  // H_t(1/eps), possibly +inf
  BoundParams params;
};

/// (1 + eps_bar) EZ + sigma sqrt(2t/n) + (1/3 + 1/eps_bar) t/n.
double bousquet_threshold(double EZ_sigma, double sigma, const BoundParams& params);

/// sigma sqrt(2t/n) + t/n. The factor records which confidence level the
/// caller uses it at (1: e^{-t}, 2: e^{-t}/2); it does not change the value.
double bernstein_threshold(double sigma, double t, Index n, int two_sided_factor = 1);

/// q eps/(1 - q eps) H_t(1/eps) + 2t/((1 - q eps) n) and its peeling tail.
ExcessRiskBound delta_tn(const TabulatedFunction& H_t, const BoundParams& params);
ExcessRiskBound delta_tn(double H_value, const BoundParams& params);

/// Supremum over {f : |f - fbar| <= 1, excess(f) > delta} of
///   |(P_n - P)(f - fbar)| / (eps (H + excess(f)) + 2t/(qn)),
/// or 0 when that set is empty.
double ratio_statistic(const ClassProfile& prof, const Vector& empirical_risk, const BoundParams& params,
                       double H_value, double delta);
double ratio_statistic(const DiscreteDistribution& P, const FunctionClass& F, const EmpiricalMeasure& Pn,
                       const BoundParams& params, double H_value, double delta);

struct ConditionCheck {
  bool holds = true;
  Index worst_member = -1;  // grid point with the smallest slack
  Index worst_state = -1;
  double worst_slack = kInfinity;  // right side minus left side
};

/// eta_n |gamma_theta - gamma_thetabar| <= tau(theta - thetabar) v eta_n on every
/// grid point and state.
ConditionCheck condition_bb_check(const DiscreteDistribution& P, const FunctionClass& F, double eta_n);

/// D(excess(gamma_theta)) >= tau(theta - thetabar) - 1e-9 over the grid points
/// with |gamma_theta - gamma_thetabar| <= 1.
ConditionCheck condition_cc_check(const DiscreteDistribution& P, const FunctionClass& F,
                                  const TabulatedFunction& D_bold);

/// Upper envelope of tau(theta - thetabar) against excess over the grid points
/// with unit sup deviation. Entry i covers every point with excess below
/// delta_grid(i+1), so interpolated lookups never undershoot.
TabulatedFunction cc_envelope(const DiscreteDistribution& P, const FunctionClass& F, const Vector& delta_grid);

/// D(delta_tn).
double tau_n(const TabulatedFunction& D_bold, double delta_tn);

struct Interpolation {
  Vector theta;
  double alpha = 1.0;
};

/// theta~ = alpha thetahat + (1 - alpha) thetabar with
/// alpha = 2 tau_n / (2 tau_n + tau(thetahat - thetabar)).
Interpolation interpolate_theta(const Vector& theta_hat, const Vector& theta_bar, double tau_n, Norm norm);

}  // namespace exrisk

#endif  // EXRISK_BOUNDS_HPP
