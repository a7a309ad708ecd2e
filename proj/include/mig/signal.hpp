#pragma once

#include <vector>

#include "mig/hermitian.hpp"
#include "mig/rng.hpp"

namespace mig {

// Compound clutter-plus-noise covariance C = sigma_c^2 C0 + sigma_n^2 I with
// [C0]_ij = rho^|i-j| exp(i 2 pi f_c (i-j)) and sigma_c^2 = sigma_n^2 10^(cnr/10).
struct ClutterModel {
  int n = 8;             // pulses per cell
  double sigma_n2 = 1.0;
  double cnr_db = 25.0;
  double rho = 0.95;
  double f_c = 0.1;
};

// Narrowband jammer at normalized Doppler f_i with power sigma_i^2 =
// sigma_n^2 10^(power_db/10), occupying the lowest-index secondary cells.
struct InterferenceModel {
  int count = 0;
  double f_i = 0.22;
  double power_db = 30.0;
};

// Cell under test: C_t = tau C + q q^H with a random q renormalized to
// ||q||^2 = q_power.
struct CutModel {
  double tau = 1.2;
  double q_power = 0.0;
};

struct TargetModel {
  double f_d = 0.2;
};

double db_to_linear(double db);
double clutter_power(const ClutterModel& cm);  // sigma_c^2

// Unit-norm Doppler steering vector s_k = exp(-i 2 pi f_d k) / sqrt(N).
ComplexVector steering_vector(int n, double f_d);

// HPD model of one pulse train: averaged autocorrelation lags r, then
// R = r r^H + ||r||^2 I. Zero input has no spectral content and is rejected.
HpdMatrix build_hpd(const ComplexVector& y);

ComplexMatrix scm(const std::vector<ComplexVector>& ys);

HpdMatrix clutter_covariance(const ClutterModel& cm);
HpdMatrix interference_covariance(const HpdMatrix& c, const InterferenceModel& im,
                                  double sigma_n2);
HpdMatrix cut_covariance(const HpdMatrix& c, const CutModel& cut, RngStream& rng);

// Draws y = C^{1/2} z with z circular standard normal. The square root is
// factored once at construction for reuse across trials.
class GaussianSampler {
 public:
  explicit GaussianSampler(const HpdMatrix& c);
  ComplexVector draw(RngStream& rng) const;
  Index dim() const { return sqrt_c_.rows(); }

 private:
  ComplexMatrix sqrt_c_;
};

std::vector<ComplexVector> sample_gaussian(const HpdMatrix& c, int count, RngStream& rng);

// Target amplitude placing the cell-averaged SCR at scr_db, using the
// secondary-data SCM as the reference clutter power along s.
double target_amplitude(double scr_db, const ComplexVector& s, const ComplexMatrix& secondary_scm);

}  // namespace mig
