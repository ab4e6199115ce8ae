#include "exrisk/bounds.hpp"

#include <algorithm>

namespace exrisk {

namespace {

constexpr double kUnitSlack = 1e-12;

const ParameterGrid& require_parametric(const FunctionClass& F) {
  if (!F.parameters()) throw Error("condition needs a convex-parametric class");
  return *F.parameters();
}

}  // namespace

void BoundParams::validate() const {
  if (!(t > 0.0)) throw Error("t must be positive");
  if (!(q > 1.0)) throw Error("q must exceed 1");
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (!(q * eps < 1.0)) throw Error("peeling constraint violated");
  if (!(eps_bar > 0.0)) throw Error("eps_bar must be positive");
  if (n < 1) throw Error("n must be at least 1");
  if (!(eta_n > 0.0)) throw Error("eta_n must be positive");
}

TailBound peeling_tail(double q, double delta, double t) {
  TailBound out;
  if (!(delta > 0.0)) return out;
  if (!std::isfinite(delta)) {
    out.prob = 0.0;
    out.unclipped = 0.0;
    out.vacuous = false;
    return out;
  }
  out.unclipped = std::log(q / delta) / std::log(q) * std::exp(-t);
  out.vacuous = out.unclipped > 1.0;
  out.prob = std::clamp(out.unclipped, 0.0, 1.0);
  return out;
}

double bousquet_threshold(double EZ_sigma, double sigma, const BoundParams& params) {
  const double tn = params.t / static_cast<double>(params.n);
  return (1.0 + params.eps_bar) * EZ_sigma + sigma * std::sqrt(2.0 * tn) +
         (1.0 / 3.0 + 1.0 / params.eps_bar) * tn;
}

double bernstein_threshold(double sigma, double t, Index n, int two_sided_factor) {
  if (two_sided_factor != 1 && two_sided_factor != 2) throw Error("two-sided factor must be 1 or 2");
  const double tn = t / static_cast<double>(n);
  return sigma * std::sqrt(2.0 * tn) + tn;
}

ExcessRiskBound delta_tn(double H_value, const BoundParams& params) {
  if (!(params.q * params.eps < 1.0)) throw Error("peeling constraint violated");
  params.validate();
  ExcessRiskBound out;
  out.params = params;
  out.H_value = H_value;
  if (!std::isfinite(H_value)) return out;

  const double qe = params.q * params.eps;
  out.delta_tn = qe / (1.0 - qe) * H_value + 2.0 * params.t / ((1.0 - qe) * static_cast<double>(params.n));
  const TailBound tail = peeling_tail(params.q, out.delta_tn, params.t);
  out.tail_prob = tail.prob;
  out.vacuous = tail.vacuous;
  return out;
}

ExcessRiskBound delta_tn(const TabulatedFunction& H_t, const BoundParams& params) {
  if (!(params.q * params.eps < 1.0)) throw Error("peeling constraint violated");
  return delta_tn(H_t(1.0 / params.eps), params);
}

double ratio_statistic(const ClassProfile& prof, const Vector& empirical_risk, const BoundParams& params,
                       double H_value, double delta) {
  if (!std::isfinite(H_value)) return 0.0;
  const Index fbar = prof.minimizer;
  const double additive = 2.0 * params.t / (params.q * static_cast<double>(params.n));
  double sup = 0.0;
  for (Index i = 0; i < prof.risk.size(); ++i) {
    if (prof.sup_dev(i) > 1.0 + kUnitSlack || !(prof.excess(i) > delta)) continue;
    const double centered = (empirical_risk(i) - empirical_risk(fbar)) - (prof.risk(i) - prof.risk(fbar));
    const double denom = params.eps * (H_value + prof.excess(i)) + additive;
    sup = std::max(sup, std::abs(centered) / denom);
  }
  return sup;
}

double ratio_statistic(const DiscreteDistribution& P, const FunctionClass& F, const EmpiricalMeasure& Pn,
                       const BoundParams& params, double H_value, double delta) {
  if (!(delta > 0.0)) throw Error("ratio statistic needs delta > 0");
  return ratio_statistic(profile(P, F), empirical_risks(Pn, F), params, H_value, delta);
}

ConditionCheck condition_bb_check(const DiscreteDistribution& P, const FunctionClass& F, double eta_n) {
  const ParameterGrid& grid = require_parametric(F);
  const Index fbar = risk_minimizer(P, F);
  ConditionCheck out;
  for (Index i = 0; i < F.size(); ++i) {
    const double right = std::max(grid.distance(i, fbar), eta_n);
    for (Index x = 0; x < F.num_states(); ++x) {
      const double left = eta_n * std::abs(F.members()(i, x) - F.members()(fbar, x));
      const double slack = right - left;
      if (slack < out.worst_slack) {
        out.worst_slack = slack;
        out.worst_member = i;
        out.worst_state = x;
      }
    }
  }
  out.holds = out.worst_slack >= -kUnitSlack;
  return out;
}

ConditionCheck condition_cc_check(const DiscreteDistribution& P, const FunctionClass& F,
                                  const TabulatedFunction& D_bold) {
  const ParameterGrid& grid = require_parametric(F);
  const ClassProfile prof = profile(P, F);
  ConditionCheck out;
  for (Index i = 0; i < F.size(); ++i) {
    if (prof.sup_dev(i) > 1.0 + kUnitSlack) continue;
    const double slack = D_bold(prof.excess(i)) - grid.distance(i, prof.minimizer);
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst_member = i;
    }
  }
  out.holds = out.worst_slack >= -1e-9;
  return out;
}

TabulatedFunction cc_envelope(const DiscreteDistribution& P, const FunctionClass& F, const Vector& delta_grid) {
  const ParameterGrid& grid = require_parametric(F);
  const ClassProfile prof = profile(P, F);
  const Index m = delta_grid.size();
  Vector D = Vector::Zero(m);
  for (Index j = 0; j < m; ++j) {
    const double cover = j + 1 < m ? delta_grid(j + 1) : kInfinity;
    for (Index i = 0; i < F.size(); ++i) {
      if (prof.sup_dev(i) > 1.0 + kUnitSlack || prof.excess(i) > cover) continue;
      D(j) = std::max(D(j), grid.distance(i, prof.minimizer));
    }
  }
  return {delta_grid, D, m >= 2 ? Extrapolation::clamp : Extrapolation::infinite};
}

double tau_n(const TabulatedFunction& D_bold, double delta_tn) { return D_bold(delta_tn); }

Interpolation interpolate_theta(const Vector& theta_hat, const Vector& theta_bar, double tau_n, Norm norm) {
  if (!(tau_n > 0.0)) throw Error("interpolation needs tau_n > 0");
  if (theta_hat.size() != theta_bar.size()) throw Error("parameter dimension mismatch");
  const double dist = norm_of(norm, theta_hat - theta_bar);
  Interpolation out;
  out.alpha = 2.0 * tau_n / (2.0 * tau_n + dist);
  out.theta = out.alpha * theta_hat + (1.0 - out.alpha) * theta_bar;
  return out;
}

}  // namespace exrisk
