#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mig/lda.hpp"

namespace mig {

enum class DetectorKind { LdaMig, Mig, Amf, Ace, Mtd };

struct DetectorSpec {
  DetectorKind kind = DetectorKind::Mig;
  Measure measure = Measure::Airm;       // mig and lda_mig
  std::optional<Projection> projection;  // lda_mig only

  void validate() const;
  std::string name() const;  // csv series label: amf, ace, mtd, mig_airm, lda_airm
};

// Geometry detector: squared distance from the cell-under-test matrix to the
// geometric mean of the secondary matrices.
double mig_statistic(Measure m, const HpdMatrix& r_d, const HpdMatrix& r_g);

// Same comparison after projecting both matrices through W.
double lda_mig_statistic(const Projection& proj, const HpdMatrix& r_d, const HpdMatrix& r_g);

// Adaptive matched filter |y^H M^{-1} s|^2 / (s^H M^{-1} s).
double amf_statistic(const ComplexVector& y_d, const ComplexVector& s, const ComplexMatrix& m_hat);

// Adaptive coherence estimator; callers pass the trace-normalized SCM.
double ace_statistic(const ComplexVector& y_d, const ComplexVector& s, const ComplexMatrix& m_hat);

// Non-adaptive Doppler filter-bank cell |s^H y|^2; the conventional baseline.
double mtd_statistic(const ComplexVector& y_d, const ComplexVector& s);

// N * M / tr(M); the normalization used for the ACE covariance estimate.
ComplexMatrix trace_normalized(const ComplexMatrix& m);

struct CalibratedThreshold {
  double gamma = 0.0;
  double pfa_target = 0.0;
  long long trials_used = 0;
  bool under_recommended = false;  // fewer than 100/pfa calibration trials
};

// Order-statistic threshold: gamma is the (c+1)-th largest of the null
// statistics with c = floor(pfa * n), so strict exceedance happens with
// empirical rate c/n <= pfa. pfa = 1 yields gamma = -inf.
CalibratedThreshold calibrate_threshold(const std::vector<double>& h0_stats, double pfa);

struct PdEstimate {
  double pd = 0.0;
  double se = 0.0;  // binomial standard error
};

PdEstimate estimate_pd(const std::vector<double>& h1_stats, double gamma);

}  // namespace mig
