#include "exrisk/selection.hpp"

#include <algorithm>
#include <numeric>

namespace exrisk {

namespace {

std::vector<FunctionClass> materialize(const FunctionClass& umbrella, const std::vector<std::vector<Index>>& idx) {
  std::vector<FunctionClass> out;
  out.reserve(idx.size());
  for (const auto& members : idx) {
    if (members.empty()) throw Error("model is empty");
    out.push_back(umbrella.subset(members));
  }
  return out;
}

PenaltyTerm conjugate_term(const TabulatedFunction& conj, double arg, double t_k, Index n, double eps) {
  const double value = conj(arg);
  if (!std::isfinite(value)) return {kInfinity, true};
  return {eps * value + t_k / static_cast<double>(n), false};
}

}  // namespace

ModelFamily::ModelFamily(FunctionClass umbrella, std::vector<std::vector<Index>> model_indices,
                         std::vector<double> t_schedule, double eps)
    : umbrella_(std::move(umbrella)),
      indices_(std::move(model_indices)),
      models_(materialize(umbrella_, indices_)),
      t_schedule_(std::move(t_schedule)),
      eps_(eps) {
  if (models_.empty()) throw Error("model family is empty");
  if (t_schedule_.size() != models_.size()) throw Error("t schedule length must equal the number of models");
  for (double t : t_schedule_)
    if (!(t > 0.0)) throw Error("every t_k must be positive");
  if (!(eps_ > 0.0 && eps_ < 1.0)) throw Error("eps must lie in (0, 1)");
}

std::vector<double> ModelFamily::default_schedule(double t, std::size_t num_models) {
  return std::vector<double>(num_models, t + std::log(static_cast<double>(num_models)));
}

double ModelFamily::failure_budget() const {
  double s = 0.0;
  for (double t : t_schedule_) s += std::exp(-t);
  return s;
}

std::vector<ModelFit> fit_models(const ModelFamily& family, const EmpiricalMeasure& Pn,
                                 const EmpiricalMeasure& Pn_prime, const DiscreteDistribution& P) {
  if (Pn.n() != Pn_prime.n()) throw Error("the two samples must have equal size");
  const double risk_star = risks(P, family.umbrella()).minCoeff();

  std::vector<ModelFit> fits;
  fits.reserve(static_cast<std::size_t>(family.size()));
  for (Index k = 0; k < family.size(); ++k) {
    const FunctionClass& Fk = family.model(k);
    const Vector r = risks(P, Fk);
    const Vector rn = empirical_risks(Pn, Fk);
    const Vector rn_prime = empirical_risks(Pn_prime, Fk);

    ModelFit fit;
    fit.k = k;
    fit.f_hat = argmin_lowest(rn);
    fit.f_hat_prime = argmin_lowest(rn_prime);
    fit.f_bar = argmin_lowest(r);
    fit.E_k = r(fit.f_hat) - r(fit.f_bar);
    fit.E_k_prime = r(fit.f_hat_prime) - r(fit.f_bar);
    fit.Ehat_k = rn(fit.f_bar) - rn(fit.f_hat);
    fit.Ehat_k_prime = rn_prime(fit.f_bar) - rn_prime(fit.f_hat_prime);
    fit.Pn_f_hat = rn(fit.f_hat);
    fit.excess_star_bar = r(fit.f_bar) - risk_star;
    fit.excess_star_hat = r(fit.f_hat) - risk_star;
    fits.push_back(fit);
  }
  return fits;
}

PenaltyTerm alpha_k(const TabulatedFunction& phi_conj, double t_k, Index n, double eps) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  return conjugate_term(phi_conj, std::sqrt(t_k / (static_cast<double>(n) * eps * eps)), t_k, n, eps);
}

PenaltyTerm gamma_k(const TabulatedFunction& phi_k_conj, double t_k, Index n, double eps) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  return conjugate_term(phi_k_conj, std::sqrt(2.0 * t_k / (static_cast<double>(n) * eps * eps)), t_k, n, eps);
}

double beta_hat(const EmpiricalMeasure& Pn, const EmpiricalMeasure& Pn_prime, const ModelFit& fit,
                const FunctionClass& F_k) {
  const Loss diff = F_k.member(fit.f_hat) - F_k.member(fit.f_hat_prime);
  return empirical_mean(Pn_prime, diff) - empirical_mean(Pn, diff);
}

PenaltySchedule pi_hat(const std::vector<PenaltyTerm>& alpha, const std::vector<PenaltyTerm>& gamma,
                       const std::vector<double>& beta) {
  if (alpha.size() != gamma.size() || alpha.size() != beta.size()) throw Error("penalty components differ in length");
  PenaltySchedule out;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    const bool vacuous = alpha[k].vacuous || gamma[k].vacuous;
    out.alpha.push_back(alpha[k].value);
    out.gamma.push_back(gamma[k].value);
    out.beta_hat.push_back(beta[k]);
    out.pi_hat.push_back(vacuous ? kInfinity : beta[k] + alpha[k].value + 2.0 * gamma[k].value);
    out.vacuous.push_back(vacuous);
  }
  return out;
}

SelectionResult select(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties) {
  if (fits.empty()) throw Error("no models to select from");
  if (static_cast<Index>(fits.size()) != penalties.size()) throw Error("fits and penalties differ in length");
  SelectionResult out;
  Vector objective(static_cast<Index>(fits.size()));
  for (std::size_t k = 0; k < fits.size(); ++k) {
    out.objective.push_back(fits[k].Pn_f_hat + penalties.pi_hat[k]);
    objective(static_cast<Index>(k)) = out.objective.back();
  }
  out.k_hat = argmin_lowest(objective);
  return out;
}

OracleCheck lemma4_oracle_check(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties,
                                Index k_hat, double eps) {
  OracleCheck out;
  double best = kInfinity;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const double term = fits[k].excess_star_bar + (1.0 - eps) * (penalties.alpha[k] + penalties.pi_hat[k]);
    best = std::min(best, term);
  }
  out.lhs = fits[static_cast<std::size_t>(k_hat)].excess_star_hat;
  out.rhs = best / ((1.0 - eps) * (1.0 - eps));
  out.holds = !(out.lhs > out.rhs);
  return out;
}

std::vector<bool> lemma5_event_check(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties,
                                     double eps) {
  std::vector<bool> out;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const ModelFit& f = fits[k];
    const double lhs = penalties.beta_hat[k] + 2.0 * penalties.gamma[k];
    const double rhs = (1.0 - eps) * (f.E_k_prime + f.E_k) + f.Ehat_k_prime + f.Ehat_k;
    out.push_back(lhs >= rhs);
  }
  return out;
}

bool penalty_validity_event(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties, double eps) {
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const ModelFit& f = fits[k];
    if (penalties.pi_hat[k] < f.Ehat_k + (1.0 - eps) * f.E_k + penalties.alpha[k]) return false;
  }
  return true;
}

}  // namespace exrisk
