#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mig/means.hpp"
#include "mig/rng.hpp"
#include "support.hpp"

using namespace mig;
using testsup::random_hpd;

namespace {

HpdMatrix scalar(double v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return HpdMatrix(m);
}

std::vector<HpdMatrix> random_family(Index n, int k, RngStream& rng, double lo = 0.4,
                                     double hi = 2.5) {
  std::vector<HpdMatrix> rs;
  for (int i = 0; i < k; ++i) rs.push_back(random_hpd(n, rng, lo, hi));
  return rs;
}

}  // namespace

TEST_CASE("mean of the scalars 1 and 4 is 2 under every measure") {
  std::vector<HpdMatrix> rs = {scalar(1.0), scalar(4.0)};
  for (Measure m : kAllMeasures) {
    MeanResult res = geometric_mean(m, rs);
    CHECK(res.converged);
    CHECK(std::abs(res.mean.mat()(0, 0).real() - 2.0) <= 1e-9);
    CHECK(std::abs(res.mean.mat()(0, 0).imag()) <= 1e-15);
  }
}

TEST_CASE("two-matrix airm mean is the geodesic midpoint") {
  RngStream rng(301);
  HpdMatrix x = random_hpd(4, rng, 0.4, 2.5);
  HpdMatrix y = random_hpd(4, rng, 0.4, 2.5);
  ComplexMatrix xs = hpd_fun(x, MatrixFun::Sqrt);
  ComplexMatrix xis = hpd_fun(x, MatrixFun::InvSqrt);
  ComplexMatrix mid =
      xs * hpd_fun(HpdMatrix::trusted(xis * y.mat() * xis), MatrixFun::Sqrt) * xs;

  MeanOptions opts;
  opts.rel_tol = 1e-13;
  MeanResult res = geometric_mean(Measure::Airm, {x, y}, opts);
  CHECK(res.converged);
  CHECK(testsup::rel_frob_err(res.mean.mat(), mid) <= 1e-9);
}

TEST_CASE("lem mean equals exp of the averaged logs") {
  RngStream rng(302);
  std::vector<HpdMatrix> rs = random_family(4, 5, rng);
  ComplexMatrix acc = ComplexMatrix::Zero(4, 4);
  for (const HpdMatrix& r : rs) acc += hpd_fun(r, MatrixFun::Log);
  ComplexMatrix want = hpd_fun(herm_part(acc / 5.0), MatrixFun::Exp);
  MeanResult res = geometric_mean(Measure::Lem, rs);
  CHECK(res.converged);
  CHECK(testsup::rel_frob_err(res.mean.mat(), want) <= 1e-12);
}

TEST_CASE("identical inputs are a fixed point") {
  RngStream rng(303);
  HpdMatrix r = random_hpd(5, rng, 0.5, 2.0);
  std::vector<HpdMatrix> rs(7, r);
  for (Measure m : kAllMeasures) {
    MeanResult res = geometric_mean(m, rs);
    CHECK(res.converged);
    CHECK(testsup::rel_frob_err(res.mean.mat(), r.mat()) <= 1e-12);
    CHECK(mean_residual(m, res.mean, rs) <= 1e-12);
  }
}

TEST_CASE("single matrix short circuit") {
  RngStream rng(304);
  HpdMatrix r = random_hpd(3, rng, 0.5, 2.0);
  for (Measure m : kAllMeasures) {
    MeanResult res = geometric_mean(m, {r});
    CHECK(res.converged);
    CHECK((res.mean.mat() - r.mat()).norm() <= 1e-14);
  }
}

TEST_CASE("stationarity residual vanishes at convergence") {
  RngStream rng(305);
  std::vector<HpdMatrix> rs = random_family(4, 6, rng);
  MeanOptions opts;
  opts.rel_tol = 1e-12;
  for (Measure m : kAllMeasures) {
    MeanResult res = geometric_mean(m, rs, opts);
    CHECK(res.converged);
    CHECK(mean_residual(m, res.mean, rs) <= 1e-7);
  }
}

TEST_CASE("scalar means stay inside the data range") {
  RngStream rng(306);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<HpdMatrix> rs;
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double v = 0.2 + 4.8 * rng.uniform();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      rs.push_back(scalar(v));
    }
    for (Measure m : kAllMeasures) {
      const double v = geometric_mean(m, rs).mean.mat()(0, 0).real();
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
  }
}

TEST_CASE("permutation invariance of the fixed points") {
  RngStream rng(307);
  std::vector<HpdMatrix> rs = random_family(4, 6, rng);
  std::vector<HpdMatrix> shuffled = {rs[3], rs[0], rs[5], rs[1], rs[4], rs[2]};
  for (Measure m : kAllMeasures) {
    ComplexMatrix a = geometric_mean(m, rs).mean.mat();
    ComplexMatrix b = geometric_mean(m, shuffled).mean.mat();
    CHECK(testsup::rel_frob_err(a, b) <= 1e-9);
  }
}

TEST_CASE("airm mean is congruence equivariant") {
  RngStream rng(308);
  std::vector<HpdMatrix> rs = random_family(4, 5, rng);
  ComplexMatrix a = testsup::random_gaussian(4, 4, rng);
  std::vector<HpdMatrix> moved;
  for (const HpdMatrix& r : rs) moved.push_back(HpdMatrix::trusted(a * r.mat() * a.adjoint()));

  MeanOptions opts;
  opts.rel_tol = 1e-13;
  ComplexMatrix lhs = geometric_mean(Measure::Airm, moved, opts).mean.mat();
  ComplexMatrix rhs = a * geometric_mean(Measure::Airm, rs, opts).mean.mat() * a.adjoint();
  CHECK(testsup::rel_frob_err(lhs, rhs) <= 1e-7);
}

TEST_CASE("the mean minimizes its own cost among rival candidates") {
  RngStream rng(309);
  std::vector<HpdMatrix> rs = random_family(4, 6, rng);
  std::vector<ComplexMatrix> candidates;
  candidates.push_back(arithmetic_mean_hpd(rs).mat());
  for (Measure m : kAllMeasures) candidates.push_back(geometric_mean(m, rs).mean.mat());
  for (Measure m : kAllMeasures) {
    const double at_mean = mean_cost(m, geometric_mean(m, rs).mean.mat(), rs);
    for (const ComplexMatrix& c : candidates) CHECK(at_mean <= mean_cost(m, c, rs) + 1e-9);
  }
}

TEST_CASE("airm cost trace is monotone when tracked") {
  RngStream rng(310);
  std::vector<HpdMatrix> rs = random_family(5, 8, rng, 0.1, 8.0);
  MeanOptions opts;
  opts.track_cost = true;
  // Wide spectra make the fixed-point map contract slowly, so give it room.
  opts.max_iter = 1200;
  MeanResult res = geometric_mean(Measure::Airm, rs, opts);
  CHECK(res.converged);
  REQUIRE(res.cost_trace.size() >= 2);
  for (size_t i = 1; i < res.cost_trace.size(); ++i)
    CHECK(res.cost_trace[i] <= res.cost_trace[i - 1] + 1e-10 * std::max(1.0, res.cost_trace[i - 1]));
}

TEST_CASE("log-euclidean initialization reaches the same fixed point") {
  RngStream rng(311);
  std::vector<HpdMatrix> rs = random_family(4, 5, rng);
  MeanOptions a, b;
  a.rel_tol = b.rel_tol = 1e-13;
  b.init = MeanOptions::Init::LogEuclidean;
  for (Measure m : {Measure::Airm, Measure::Jbld}) {
    ComplexMatrix ma = geometric_mean(m, rs, a).mean.mat();
    ComplexMatrix mb = geometric_mean(m, rs, b).mean.mat();
    CHECK(testsup::rel_frob_err(ma, mb) <= 1e-8);
  }
}

TEST_CASE("input validation") {
  RngStream rng(312);
  std::vector<HpdMatrix> empty;
  for (Measure m : kAllMeasures) CHECK_THROWS_AS(geometric_mean(m, empty), std::invalid_argument);
  std::vector<HpdMatrix> mixed = {random_hpd(3, rng, 0.5, 2.0), random_hpd(4, rng, 0.5, 2.0)};
  for (Measure m : kAllMeasures) CHECK_THROWS_AS(geometric_mean(m, mixed), std::invalid_argument);
  CHECK_THROWS_AS(arithmetic_mean({}), std::invalid_argument);
}
