#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mig/detect.hpp"
#include "mig/rng.hpp"
#include "mig/signal.hpp"
#include "support.hpp"

using namespace mig;

TEST_CASE("filter statistics on whitened data") {
  ComplexVector s = ComplexVector::Zero(2);
  s(0) = 1.0;
  ComplexVector y(2);
  y << Complex(3.0, 4.0), Complex(1.0, 0.0);
  ComplexMatrix eye = ComplexMatrix::Identity(2, 2);

  CHECK(amf_statistic(y, s, eye) == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(mtd_statistic(y, s) == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(ace_statistic(y, s, eye) == doctest::Approx(25.0 / 26.0).epsilon(1e-12));
}

TEST_CASE("ace is scale invariant and bounded by one") {
  RngStream rng(901);
  ComplexVector s = steering_vector(4, 0.2);
  HpdMatrix m = testsup::random_hpd(4, rng, 0.5, 4.0);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexVector y(4);
    for (int i = 0; i < 4; ++i) y(i) = rng.cnormal();
    const double v = ace_statistic(y, s, m.mat());
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(ace_statistic(3.0 * y, s, m.mat()) == doctest::Approx(v).epsilon(1e-12));
    CHECK(ace_statistic(y, s, (5.0 * m.mat()).eval()) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("amf rejects a rank-deficient covariance estimate") {
  ComplexVector s = steering_vector(3, 0.1);
  ComplexVector y = ComplexVector::Ones(3);
  ComplexMatrix singular = ComplexMatrix::Ones(3, 3);
  CHECK_THROWS_AS(amf_statistic(y, s, singular), std::runtime_error);
}

TEST_CASE("trace normalization") {
  RngStream rng(902);
  HpdMatrix m = testsup::random_hpd(4, rng, 0.5, 4.0);
  ComplexMatrix t = trace_normalized(m.mat());
  CHECK(t.trace().real() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(trace_normalized(ComplexMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("geometry statistics reduce to squared distances") {
  RngStream rng(903);
  HpdMatrix rd = testsup::random_hpd(4, rng, 0.5, 3.0);
  HpdMatrix rg = testsup::random_hpd(4, rng, 0.5, 3.0);
  for (Measure m : kAllMeasures)
    CHECK(mig_statistic(m, rd, rg) == doctest::Approx(sq_distance(m, rd, rg)));

  Projection p;
  p.w = random_stiefel(4, 2, 904);
  p.measure = Measure::Lem;
  ComplexMatrix pw = p.w.mat();
  const double direct = sq_distance_unchecked(Measure::Lem, pw.adjoint() * rd.mat() * pw,
                                              pw.adjoint() * rg.mat() * pw);
  CHECK(lda_mig_statistic(p, rd, rg) == doctest::Approx(direct).epsilon(1e-12));

  HpdMatrix small = testsup::random_hpd(3, rng, 0.5, 3.0);
  CHECK_THROWS_AS(lda_mig_statistic(p, small, small), std::invalid_argument);
}

TEST_CASE("detector specs validate and name themselves") {
  DetectorSpec amf;
  amf.kind = DetectorKind::Amf;
  CHECK(amf.name() == "amf");
  CHECK_NOTHROW(amf.validate());

  DetectorSpec mig;
  mig.kind = DetectorKind::Mig;
  mig.measure = Measure::Skld;
  CHECK(mig.name() == "mig_skld");

  DetectorSpec lda;
  lda.kind = DetectorKind::LdaMig;
  lda.measure = Measure::Lem;
  CHECK_THROWS_AS(lda.validate(), std::invalid_argument);  // projection missing
  Projection p;
  p.w = random_stiefel(4, 2, 905);
  p.measure = Measure::Airm;
  lda.projection = p;
  CHECK_THROWS_AS(lda.validate(), std::invalid_argument);  // measure disagrees
  lda.measure = Measure::Airm;
  CHECK_NOTHROW(lda.validate());
  CHECK(lda.name() == "lda_airm");
}

TEST_CASE("threshold from the null order statistics") {
  std::vector<double> stats(1000);
  std::iota(stats.begin(), stats.end(), 1.0);  // 1..1000

  CalibratedThreshold t = calibrate_threshold(stats, 0.01);
  CHECK(t.gamma == doctest::Approx(990.0));
  CHECK(t.trials_used == 1000);
  CHECK(t.pfa_target == 0.01);
  CHECK(t.under_recommended);  // fewer than 100/pfa trials

  // exactly ten of the null statistics exceed the threshold
  PdEstimate onself = estimate_pd(stats, t.gamma);
  CHECK(onself.pd == doctest::Approx(0.01).epsilon(1e-12));

  // order does not matter
  std::vector<double> shuffled = stats;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[3], shuffled[700]);
  CHECK(calibrate_threshold(shuffled, 0.01).gamma == doctest::Approx(990.0));

  CHECK(!calibrate_threshold(stats, 0.1).under_recommended);
  CHECK(std::isinf(calibrate_threshold(stats, 1.0).gamma));
  CHECK(calibrate_threshold(stats, 1.0).gamma < 0.0);

  CHECK_THROWS_AS(calibrate_threshold(stats, 0.0001), std::invalid_argument);  // too few trials
  CHECK_THROWS_AS(calibrate_threshold(stats, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_threshold(stats, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_threshold({}, 0.5), std::invalid_argument);
}

TEST_CASE("pd estimation is strict and reports binomial error") {
  std::vector<double> stats = {1.0, 2.0, 3.0, 4.0};
  PdEstimate half = estimate_pd(stats, 2.5);
  CHECK(half.pd == doctest::Approx(0.5));
  CHECK(half.se == doctest::Approx(0.25));

  // equality does not count as a detection
  CHECK(estimate_pd(stats, 3.0).pd == doctest::Approx(0.25));
  CHECK(estimate_pd(stats, 10.0).pd == 0.0);
  CHECK(estimate_pd(stats, 10.0).se == 0.0);
  CHECK(estimate_pd(stats, 0.0).pd == 1.0);
  CHECK_THROWS_AS(estimate_pd({}, 1.0), std::invalid_argument);
}
