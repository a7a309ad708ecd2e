#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "mig/signal.hpp"
#include "support.hpp"

using namespace mig;

TEST_CASE("decibel conversions") {
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-10.0) == doctest::Approx(0.1));
  ClutterModel cm;
  cm.sigma_n2 = 2.0;
  cm.cnr_db = 25.0;
  CHECK(clutter_power(cm) == doctest::Approx(2.0 * std::pow(10.0, 2.5)));
}

TEST_CASE("steering vector phases and norm") {
  ComplexVector s0 = steering_vector(4, 0.0);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s0(k) - Complex(0.5, 0.0)) <= 1e-15);

  // f_d = 1/4 walks the quarter circle clockwise
  ComplexVector s = steering_vector(4, 0.25);
  const Complex step(0.0, -1.0);
  Complex want(0.5, 0.0);
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(s(k) - want) <= 1e-14);
    want *= step;
  }
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(steering_vector(0, 0.1), std::invalid_argument);
}

TEST_CASE("pulse train covariance model on known inputs") {
  // unit impulse: single nonzero lag, identity loading of 1/16
  ComplexVector e1 = ComplexVector::Zero(4);
  e1(0) = 1.0;
  HpdMatrix r = build_hpd(e1);
  ComplexMatrix want = ComplexMatrix::Zero(4, 4);
  want(0, 0) = 1.0 / 16.0;
  want += (1.0 / 16.0) * ComplexMatrix::Identity(4, 4);
  CHECK((r.mat() - want).norm() <= 1e-14);

  // constant two-pulse train
  ComplexVector ones = ComplexVector::Ones(2);
  HpdMatrix r2 = build_hpd(ones);
  ComplexMatrix want2(2, 2);
  want2 << Complex(2.25, 0.0), Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(1.5, 0.0);
  CHECK((r2.mat() - want2).norm() <= 1e-14);

  CHECK_THROWS_AS(build_hpd(ComplexVector()), std::invalid_argument);
  CHECK_THROWS_AS(build_hpd(ComplexVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("sample covariance of unit vectors") {
  ComplexVector a = ComplexVector::Zero(2), b = ComplexVector::Zero(2);
  a(0) = 1.0;
  b(1) = 1.0;
  ComplexMatrix m = scm({a, b});
  CHECK((m - 0.5 * ComplexMatrix::Identity(2, 2)).norm() <= 1e-15);
  CHECK_THROWS_AS(scm({}), std::invalid_argument);
  CHECK_THROWS_AS(scm({a, ComplexVector::Zero(3)}), std::invalid_argument);
}

TEST_CASE("clutter covariance structure") {
  ClutterModel cm;
  cm.n = 4;
  cm.sigma_n2 = 1.0;
  cm.cnr_db = 20.0;
  cm.rho = 0.9;
  cm.f_c = 0.1;
  HpdMatrix c = clutter_covariance(cm);
  const double sc2 = clutter_power(cm);

  for (int i = 0; i < 4; ++i)
    CHECK(c.mat()(i, i).real() == doctest::Approx(sc2 + 1.0).epsilon(1e-12));
  const double pi = std::acos(-1.0);
  Complex want = sc2 * 0.9 * std::exp(Complex(0.0, -2.0 * pi * 0.1));
  CHECK(std::abs(c.mat()(0, 1) - want) <= 1e-10);
  CHECK(std::abs(c.mat()(1, 0) - std::conj(want)) <= 1e-10);
  // toeplitz along diagonals
  CHECK(std::abs(c.mat()(1, 2) - c.mat()(0, 1)) <= 1e-12);

  ClutterModel bad = cm;
  bad.rho = 1.0;
  CHECK_THROWS_AS(clutter_covariance(bad), std::invalid_argument);
  bad = cm;
  bad.sigma_n2 = 0.0;
  CHECK_THROWS_AS(clutter_covariance(bad), std::invalid_argument);
}

TEST_CASE("interference adds a unit-norm rank-one spike") {
  ClutterModel cm;
  cm.n = 6;
  HpdMatrix c = clutter_covariance(cm);
  InterferenceModel im;
  im.f_i = 0.22;
  im.power_db = 30.0;
  HpdMatrix ci = interference_covariance(c, im, cm.sigma_n2);

  const double si2 = cm.sigma_n2 * db_to_linear(im.power_db);
  CHECK(ci.mat().trace().real() ==
        doctest::Approx(c.mat().trace().real() + si2).epsilon(1e-12));
  ComplexVector s = steering_vector(6, im.f_i);
  CHECK((ci.mat() - c.mat() - si2 * (s * s.adjoint())).norm() <= 1e-8);
}

TEST_CASE("cell-under-test covariance") {
  ClutterModel cm;
  cm.n = 4;
  HpdMatrix c = clutter_covariance(cm);

  CutModel cut;
  cut.tau = 1.2;
  cut.q_power = 0.0;
  RngStream rng(801);
  HpdMatrix ct = cut_covariance(c, cut, rng);
  CHECK((ct.mat() - 1.2 * c.mat()).norm() <= 1e-12 * c.mat().norm());

  cut.q_power = 5.0;
  RngStream rng2(801);
  HpdMatrix ct2 = cut_covariance(c, cut, rng2);
  CHECK(ct2.mat().trace().real() ==
        doctest::Approx(1.2 * c.mat().trace().real() + 5.0).epsilon(1e-10));

  // identical streams give identical random spikes
  RngStream rng3(801);
  CHECK((cut_covariance(c, cut, rng3).mat() - ct2.mat()).norm() == 0.0);

  CutModel bad;
  bad.tau = 0.0;
  RngStream rng4(802);
  CHECK_THROWS_AS(cut_covariance(c, bad, rng4), std::invalid_argument);
}

TEST_CASE("gaussian sampler matches its covariance") {
  RngStream rng(803);
  HpdMatrix c = testsup::random_hpd(3, rng, 0.5, 3.0);
  GaussianSampler sampler(c);
  CHECK(sampler.dim() == 3);

  const int count = 40000;
  ComplexVector mean = ComplexVector::Zero(3);
  ComplexMatrix acc = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < count; ++i) {
    ComplexVector y = sampler.draw(rng);
    mean += y;
    acc += y * y.adjoint();
  }
  mean /= double(count);
  acc /= double(count);
  CHECK(mean.norm() <= 0.05 * std::sqrt(c.mat().trace().real()));
  CHECK((acc - c.mat()).norm() <= 0.05 * c.mat().norm());
}

TEST_CASE("gaussian draws are reproducible") {
  RngStream a(804), b(804);
  HpdMatrix c = testsup::random_hpd(2, a, 0.5, 2.0);
  RngStream a2(805), b2(805);
  std::vector<ComplexVector> ya = sample_gaussian(c, 5, a2);
  std::vector<ComplexVector> yb = sample_gaussian(c, 5, b2);
  REQUIRE(ya.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK((ya[size_t(i)] - yb[size_t(i)]).norm() == 0.0);
}

TEST_CASE("target amplitude hits the requested ratio") {
  ComplexVector s = steering_vector(4, 0.2);
  CHECK(target_amplitude(13.0, s, ComplexMatrix::Identity(4, 4)) ==
        doctest::Approx(std::sqrt(db_to_linear(13.0))).epsilon(1e-12));

  RngStream rng(806);
  HpdMatrix m = testsup::random_hpd(4, rng, 0.5, 4.0);
  const double alpha = target_amplitude(7.0, s, m.mat());
  const double whitened = s.dot(m.mat().inverse() * s).real();
  CHECK(alpha * alpha * whitened == doctest::Approx(db_to_linear(7.0)).epsilon(1e-10));
}
