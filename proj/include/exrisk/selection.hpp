#ifndef EXRISK_SELECTION_HPP
#define EXRISK_SELECTION_HPP

#include "exrisk/measures.hpp"
#include "exrisk/tabulated.hpp"

#include <vector>

namespace exrisk {

/// Candidate models F_k, each a list of member indices into an umbrella class.
class ModelFamily {
 public:
  ModelFamily(FunctionClass umbrella, std::vector<std::vector<Index>> model_indices,
              std::vector<double> t_schedule, double eps);

  /// t_k = t + log K for every model, so that sum_k e^{-t_k} = e^{-t}.
  static std::vector<double> default_schedule(double t, std::size_t num_models);

  Index size() const { return static_cast<Index>(models_.size()); }
  const FunctionClass& umbrella() const { return umbrella_; }
  const FunctionClass& model(Index k) const { return models_[static_cast<std::size_t>(k)]; }
  const std::vector<Index>& indices(Index k) const { return indices_[static_cast<std::size_t>(k)]; }
  const std::vector<std::vector<Index>>& all_indices() const { return indices_; }
  const std::vector<double>& t_schedule() const { return t_schedule_; }
  double eps() const { return eps_; }

  /// sum_k e^{-t_k}.
  double failure_budget() const;

 private:
  FunctionClass umbrella_;
  std::vector<std::vector<Index>> indices_;
  std::vector<FunctionClass> models_;
  std::vector<double> t_schedule_;
  double eps_;
};

/// Per-model fits on the two half samples. Indices are local to model k.
struct ModelFit {
  Index k = 0;
  Index f_hat = 0;
  Index f_hat_prime = 0;
  Index f_bar = 0;
  double E_k = 0.0;           // P(fhat_k - fbar_k)
  double E_k_prime = 0.0;     // P(fhat'_k - fbar_k)
  double Ehat_k = 0.0;        // P_n(fbar_k - fhat_k)
  double Ehat_k_prime = 0.0;  // P'_n(fbar_k - fhat'_k)
  double Pn_f_hat = 0.0;      // P_n fhat_k
  double excess_star_bar = 0.0;  // P(fbar_k - f_*)
  double excess_star_hat = 0.0;  // P(fhat_k - f_*)
};

std::vector<ModelFit> fit_models(const ModelFamily& family, const EmpiricalMeasure& Pn,
                                 const EmpiricalMeasure& Pn_prime, const DiscreteDistribution& P);

/// A penalty ingredient; `vacuous` when the conjugate is +inf at its argument.
struct PenaltyTerm {
  double value = 0.0;
  bool vacuous = false;
};

/// eps phi*(sqrt(t_k / (n eps^2))) + t_k / n.
PenaltyTerm alpha_k(const TabulatedFunction& phi_conj, double t_k, Index n, double eps);
/// eps phi_k*(sqrt(2 t_k / (n eps^2))) + t_k / n.
PenaltyTerm gamma_k(const TabulatedFunction& phi_k_conj, double t_k, Index n, double eps);

/// (P'_n - P_n)(fhat_k - fhat'_k).
double beta_hat(const EmpiricalMeasure& Pn, const EmpiricalMeasure& Pn_prime, const ModelFit& fit,
                const FunctionClass& F_k);

struct PenaltySchedule {
  std::vector<double> alpha;
  std::vector<double> gamma;
  std::vector<double> beta_hat;
  std::vector<double> pi_hat;  // beta_hat + alpha + 2 gamma; +inf when vacuous
  std::vector<bool> vacuous;

  Index size() const { return static_cast<Index>(pi_hat.size()); }
};

PenaltySchedule pi_hat(const std::vector<PenaltyTerm>& alpha, const std::vector<PenaltyTerm>& gamma,
                       const std::vector<double>& beta);

struct OracleCheck {
  double lhs = 0.0;  // excess of fhat_khat over f_*
  double rhs = 0.0;  // the oracle bound, min over k
  bool holds = true;
};

struct SelectionResult {
  Index k_hat = 0;
  std::vector<double> objective;  // P_n fhat_k + pi_hat(k)
  OracleCheck oracle;
  bool lemma5_holds = true;
  bool penalty_valid = true;
};

/// argmin_k P_n fhat_k + pi_hat(k), lowest index on ties.
SelectionResult select(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties);

/// excess(fhat_khat) <= (1-eps)^{-2} min_k { excess(fbar_k) + (1-eps)[alpha(k) + pi_hat(k)] }.
OracleCheck lemma4_oracle_check(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties,
                                Index k_hat, double eps);

/// Per model: beta_hat + 2 gamma >= (1-eps)(E'_k + E_k) + Ehat'_k + Ehat_k.
std::vector<bool> lemma5_event_check(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties,
                                     double eps);

/// pi_hat(k) >= Ehat_k + (1-eps) E_k + alpha(k) for every k.
bool penalty_validity_event(const std::vector<ModelFit>& fits, const PenaltySchedule& penalties, double eps);

}  // namespace exrisk

#endif  // EXRISK_SELECTION_HPP
