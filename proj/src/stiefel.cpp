#include "mig/stiefel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mig/hermitian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mig {

namespace {

double orthonormality_defect(const ComplexMatrix& w) {
  return (w.adjoint() * w - ComplexMatrix::Identity(w.cols(), w.cols())).norm();
}

}  // namespace

StiefelPoint::StiefelPoint(const ComplexMatrix& w) {
  if (w.rows() < w.cols() || w.cols() == 0)
    throw std::invalid_argument("StiefelPoint: need N >= M >= 1, got " + std::to_string(w.rows()) +
                                "x" + std::to_string(w.cols()));
  const double d = orthonormality_defect(w);
  if (!(d <= 1e-10))
    throw std::invalid_argument("StiefelPoint: columns not orthonormal (defect " +
                                std::to_string(d) + ")");
  w_ = w;
}

StiefelPoint StiefelPoint::trusted(const ComplexMatrix& w) {
  StiefelPoint p;
  p.w_ = w;
  return p;
}

ComplexMatrix riemannian_gradient(const StiefelPoint& w, const ComplexMatrix& egrad) {
  if (egrad.rows() != w.rows() || egrad.cols() != w.cols())
    throw std::invalid_argument("riemannian_gradient: shape mismatch");
  // Second projection pass scrubs the O(eps*|egrad|) normal residue left by the
  // first when the ambient gradient is much larger than its tangent part.
  ComplexMatrix z = egrad - w.mat() * herm_part(w.mat().adjoint() * egrad);
  z -= w.mat() * herm_part(w.mat().adjoint() * z);
  return z;
}

ComplexMatrix orthonormalize(const ComplexMatrix& a) {
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < a.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

StiefelPoint geodesic_step(const StiefelPoint& w, const ComplexMatrix& z, double t) {
  const Index n = w.rows(), m = w.cols();
  if (z.rows() != n || z.cols() != m)
    throw std::invalid_argument("geodesic_step: direction shape mismatch");
  ComplexMatrix a = w.mat().adjoint() * z;
  const double tangency = (a + a.adjoint()).norm();
  if (!(tangency <= 1e-8 * std::max(1.0, z.norm()))) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", tangency);
    throw std::invalid_argument("geodesic_step: direction is not tangent (defect " +
                                std::string(buf) + ")");
  }
  a = 0.5 * (a - a.adjoint());  // exact skew part

  ComplexMatrix block = ComplexMatrix::Zero(2 * m, 2 * m);
  block.topLeftCorner(m, m) = a;
  block.topRightCorner(m, m) = -(z.adjoint() * z);
  block.bottomLeftCorner(m, m) = ComplexMatrix::Identity(m, m);
  block.bottomRightCorner(m, m) = a;

  ComplexMatrix big = (t * block).exp();
  ComplexMatrix small = (-t * a).exp();
  ComplexMatrix bases(n, 2 * m);
  bases.leftCols(m) = w.mat();
  bases.rightCols(m) = z;
  ComplexMatrix g = bases * big.leftCols(m) * small;

  if (orthonormality_defect(g) > 1e-9) g = orthonormalize(g);
  return StiefelPoint::trusted(g);
}

StiefelPoint random_stiefel(Index n, Index m, uint64_t seed) {
  if (n < m || m == 0) throw std::invalid_argument("random_stiefel: need N >= M >= 1");
  RngStream rng(seed);
  ComplexMatrix a(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rng.cnormal();
  return StiefelPoint::trusted(orthonormalize(a));
}

RgdResult rgd_minimize(const std::function<double(const StiefelPoint&)>& cost,
                       const std::function<ComplexMatrix(const StiefelPoint&)>& egrad,
                       const StiefelPoint& w0, const RgdOptions& opts) {
  RgdResult res;
  res.point = w0;
  double f = cost(res.point);
  res.cost_trace.push_back(f);
  double step = opts.init_step;

  for (int it = 1; it <= opts.max_iter; ++it) {
    ComplexMatrix g = riemannian_gradient(res.point, egrad(res.point));
    const double gn = g.norm();
    res.grad_norm = gn;
    if (gn < opts.grad_tol) return res;

    ComplexMatrix dir = -g;
    const double slope = gn * gn;  // -<grad, dir>
    double t = std::min(opts.init_step, step / opts.backtrack);
    bool accepted = false;
    for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
      StiefelPoint cand = geodesic_step(res.point, dir, t);
      const double fc = cost(cand);
      if (fc <= f - opts.armijo_c * t * slope) {
        res.point = cand;
        f = fc;
        step = t;
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) {
      res.stalled = true;
      return res;
    }
    res.cost_trace.push_back(f);
    res.iterations = it;
  }
  ComplexMatrix g = riemannian_gradient(res.point, egrad(res.point));
  res.grad_norm = g.norm();
  return res;
}

}  // namespace mig
