#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mig/hermitian.hpp"
#include "mig/stiefel.hpp"
#include "support.hpp"

using namespace mig;

namespace {

double on_defect(const ComplexMatrix& w) {
  return (w.adjoint() * w - ComplexMatrix::Identity(w.cols(), w.cols())).norm();
}

ComplexMatrix random_tangent(const StiefelPoint& w, RngStream& rng) {
  return riemannian_gradient(w, testsup::random_gaussian(w.rows(), w.cols(), rng));
}

}  // namespace

TEST_CASE("StiefelPoint validation") {
  RngStream rng(501);
  StiefelPoint w = random_stiefel(5, 2, 77);
  CHECK_NOTHROW(StiefelPoint{w.mat()});
  CHECK(on_defect(w.mat()) <= 1e-13);

  ComplexMatrix bad = w.mat();
  bad(0, 0) += 0.01;
  CHECK_THROWS_AS(StiefelPoint{bad}, std::invalid_argument);

  ComplexMatrix wide(2, 5);
  wide.setZero();
  CHECK_THROWS_AS(StiefelPoint{wide}, std::invalid_argument);
  CHECK_THROWS_AS(random_stiefel(2, 5, 1), std::invalid_argument);
}

TEST_CASE("orthonormalize produces the positive-diagonal QR factor") {
  RngStream rng(502);
  ComplexMatrix a = testsup::random_gaussian(6, 3, rng);
  ComplexMatrix q = orthonormalize(a);
  CHECK(on_defect(q) <= 1e-13);
  ComplexMatrix r = q.adjoint() * a;
  for (Index j = 0; j < 3; ++j) {
    CHECK(r(j, j).real() > 0.0);
    CHECK(std::abs(r(j, j).imag()) <= 1e-12 * r(j, j).real());
    for (Index i = j + 1; i < 3; ++i) CHECK(std::abs(r(i, j)) <= 1e-12 * a.norm());
  }
  // span is preserved
  CHECK((q * r - a).norm() <= 1e-12 * a.norm());
}

TEST_CASE("riemannian gradient lands in the tangent space") {
  RngStream rng(503);
  StiefelPoint w = random_stiefel(6, 3, 78);
  ComplexMatrix g = testsup::random_gaussian(6, 3, rng);
  ComplexMatrix z = riemannian_gradient(w, g);
  ComplexMatrix a = w.mat().adjoint() * z;
  CHECK((a + a.adjoint()).norm() <= 1e-13 * std::max(1.0, g.norm()));
  // projection is idempotent
  CHECK((riemannian_gradient(w, z) - z).norm() <= 1e-13 * std::max(1.0, z.norm()));
  CHECK_THROWS_AS(riemannian_gradient(w, testsup::random_gaussian(3, 6, rng)),
                  std::invalid_argument);
}

TEST_CASE("geodesic on the unit circle") {
  ComplexMatrix w(1, 1), z(1, 1);
  w(0, 0) = 1.0;
  z(0, 0) = Complex(0.0, 1.0);
  const double pi = std::acos(-1.0);
  StiefelPoint g = geodesic_step(StiefelPoint(w), z, pi / 2.0);
  CHECK(std::abs(g.mat()(0, 0) - Complex(0.0, 1.0)) <= 1e-12);
  StiefelPoint h = geodesic_step(StiefelPoint(w), z, pi);
  CHECK(std::abs(h.mat()(0, 0) - Complex(-1.0, 0.0)) <= 1e-12);
}

TEST_CASE("geodesic basics") {
  RngStream rng(504);
  StiefelPoint w = random_stiefel(6, 3, 79);
  ComplexMatrix z = random_tangent(w, rng);

  StiefelPoint at0 = geodesic_step(w, z, 0.0);
  CHECK((at0.mat() - w.mat()).norm() <= 1e-13);

  for (double t : {0.05, 0.3, 1.0, 2.5}) {
    CHECK(on_defect(geodesic_step(w, z, t).mat()) <= 1e-9);
    CHECK(on_defect(geodesic_step(w, z, -t).mat()) <= 1e-9);
  }

  ComplexMatrix zero = ComplexMatrix::Zero(6, 3);
  CHECK((geodesic_step(w, zero, 1.7).mat() - w.mat()).norm() <= 1e-12);

  // normal directions are rejected
  CHECK_THROWS_AS(geodesic_step(w, w.mat(), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(geodesic_step(w, testsup::random_gaussian(3, 3, rng), 0.1),
                  std::invalid_argument);
}

TEST_CASE("geodesic velocity matches its direction") {
  RngStream rng(505);
  StiefelPoint w = random_stiefel(5, 2, 80);
  ComplexMatrix z = random_tangent(w, rng);
  const double eps = 1e-5;
  ComplexMatrix fd =
      (geodesic_step(w, z, eps).mat() - geodesic_step(w, z, -eps).mat()) / (2.0 * eps);
  CHECK(testsup::rel_frob_err(fd, z) <= 1e-7);
}

TEST_CASE("random_stiefel is deterministic per seed") {
  StiefelPoint a = random_stiefel(7, 3, 123);
  StiefelPoint b = random_stiefel(7, 3, 123);
  StiefelPoint c = random_stiefel(7, 3, 124);
  CHECK((a.mat() - b.mat()).norm() == 0.0);
  CHECK((a.mat() - c.mat()).norm() > 1e-3);
}

TEST_CASE("descent solves the subspace problem") {
  // maximize tr(W^H A W) over the manifold; the optimum is the sum of the
  // top eigenvalues of A
  RngStream rng(506);
  HpdMatrix a = testsup::random_hpd(8, rng, 0.5, 10.0);
  HermitianEig eig = hermitian_eig(a.mat());
  const double best = -(eig.eigenvalues(7) + eig.eigenvalues(6) + eig.eigenvalues(5));

  auto cost = [&](const StiefelPoint& w) {
    return -(w.mat().adjoint() * a.mat() * w.mat()).trace().real();
  };
  auto egrad = [&](const StiefelPoint& w) { return ComplexMatrix(-2.0 * a.mat() * w.mat()); };

  RgdOptions opts;
  opts.max_iter = 500;
  opts.grad_tol = 1e-9;
  RgdResult res = rgd_minimize(cost, egrad, random_stiefel(8, 3, 81), opts);

  CHECK_FALSE(res.stalled);
  CHECK(res.grad_norm <= 1e-6);
  CHECK(on_defect(res.point.mat()) <= 1e-9);
  CHECK(std::abs(res.cost_trace.back() - best) <= 1e-6 * std::abs(best));
  for (size_t i = 1; i < res.cost_trace.size(); ++i)
    CHECK(res.cost_trace[i] <= res.cost_trace[i - 1]);
}

TEST_CASE("zero gradient returns immediately") {
  auto cost = [](const StiefelPoint&) { return 4.2; };
  auto egrad = [](const StiefelPoint& w) { return ComplexMatrix::Zero(w.rows(), w.cols()).eval(); };
  RgdResult res = rgd_minimize(cost, egrad, random_stiefel(4, 2, 82));
  CHECK(res.iterations == 0);
  CHECK(res.grad_norm == 0.0);
  CHECK(res.cost_trace.size() == 1);
  CHECK_FALSE(res.stalled);
}

TEST_CASE("line search exhaustion reports a stall") {
  // constant cost with a nonzero gradient cannot satisfy the descent test
  RngStream rng(507);
  StiefelPoint w0 = random_stiefel(4, 2, 83);
  ComplexMatrix fake = testsup::random_gaussian(4, 2, rng);
  auto cost = [](const StiefelPoint&) { return 1.0; };
  auto egrad = [&](const StiefelPoint&) { return fake; };
  RgdResult res = rgd_minimize(cost, egrad, w0);
  CHECK(res.stalled);
  CHECK(res.cost_trace.size() == 1);
  CHECK((res.point.mat() - w0.mat()).norm() == 0.0);
}
