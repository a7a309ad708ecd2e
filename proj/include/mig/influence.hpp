#pragma once

#include <string_view>
#include <vector>

#include "mig/means.hpp"

namespace mig {

// The five covariance estimators whose robustness is compared: the four
// geometric means plus the arithmetic sample mean.
enum class Estimator { Airm, Lem, Jbld, Skld, Scm };

inline constexpr std::array<Estimator, 5> kAllEstimators = {
    Estimator::Airm, Estimator::Lem, Estimator::Jbld, Estimator::Skld, Estimator::Scm};

std::string_view estimator_name(Estimator e);
Estimator to_estimator(Measure m);

// K base matrices contaminated by J outliers with total weight epsilon
// (epsilon only enters the numerical oracle).
struct OutlierScenario {
  std::vector<HpdMatrix> base;
  std::vector<HpdMatrix> outliers;
  double epsilon = 1e-4;
};

struct InfluenceEval {
  ComplexMatrix h;      // first-order change of the estimator, Hermitian
  bool mean_converged;  // base mean fixed point reached its tolerance
};

// Closed-form first-order perturbation of each estimator at its unperturbed
// mean. The returned matrix is symmetrized.
InfluenceEval influence_eval(Estimator est, const OutlierScenario& sc);
ComplexMatrix influence_matrix(Estimator est, const OutlierScenario& sc);

// Frobenius norm of the influence matrix; the robustness experiments report
// its Monte Carlo average.
double influence_value(Estimator est, const OutlierScenario& sc);

// Numerical reference: recompute the mean with contamination weights
// (1-eps)/K on the base family and eps/J on the outliers, and return
// (perturbed - unperturbed) / eps. Fixed points start from the unperturbed
// mean and run to a tolerance well below eps.
ComplexMatrix perturbation_oracle(Estimator est, const OutlierScenario& sc);

}  // namespace mig
