#pragma once

#include <optional>
#include <vector>

#include "mig/measures.hpp"

namespace mig {

struct MeanOptions {
  int max_iter = 200;
  double rel_tol = 1e-10;  // relative Frobenius change of the iterate
  // Step scale for the airm fixed point. Unset means (2K-1)/(2K); on a cost
  // increase the step is halved toward 1/K (the scale that normalizes the
  // tangent sum), and below that halved toward zero. The accepted step is
  // kept for the next iteration.
  std::optional<double> step_eta;
  enum class Init { Arithmetic, LogEuclidean } init = Init::Arithmetic;
  bool track_cost = false;
};

struct MeanResult {
  HpdMatrix mean;
  int iterations = 0;
  double residual = 0.0;  // stationarity norm of the first-order condition
  bool converged = false;
  std::vector<double> cost_trace;  // filled when track_cost
};

// Mean of K HPD matrices under the given measure. lem and skld are closed
// form; airm and jbld iterate from the configured initial guess.
MeanResult geometric_mean(Measure m, const std::vector<HpdMatrix>& rs,
                          const MeanOptions& opts = {});

ComplexMatrix arithmetic_mean(const std::vector<ComplexMatrix>& as);
HpdMatrix arithmetic_mean_hpd(const std::vector<HpdMatrix>& rs);

// Norm of the measure-specific stationarity condition at a candidate mean;
// zero exactly at the Frechet mean.
double mean_residual(Measure m, const HpdMatrix& mean, const std::vector<HpdMatrix>& rs);

// (1/K) sum of squared distances; the objective the means minimize.
double mean_cost(Measure m, const ComplexMatrix& mean, const std::vector<HpdMatrix>& rs);

}  // namespace mig
