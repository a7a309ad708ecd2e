#include "mig/hermitian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mig {

namespace {

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
  const double d = herm_defect(a);
  if (!(d <= kHermitianTol))
    throw std::invalid_argument(std::string(who) + ": input is not Hermitian (relative defect " +
                                std::to_string(d) + ")");
}

double min_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

double herm_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const double na = a.norm();
  if (na == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / na;
}

HpdMatrix::HpdMatrix(const ComplexMatrix& a) {
  require_square(a, "HpdMatrix");
  require_hermitian(a, "HpdMatrix");
  m_ = herm_part(a);
  Eigen::LLT<ComplexMatrix> llt(m_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("HpdMatrix: input is not positive definite (min eigenvalue " +
                                std::to_string(min_eigenvalue(m_)) + ")");
  }
}

HpdMatrix HpdMatrix::trusted(const ComplexMatrix& a) {
  HpdMatrix r;
  r.m_ = herm_part(a);
  return r;
}

HermitianEig hermitian_eig(const ComplexMatrix& a) {
  require_square(a, "hermitian_eig");
  require_hermitian(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm_part(a));
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: factorization failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix hpd_fun(const ComplexMatrix& a, MatrixFun f) {
  HermitianEig eig = hermitian_eig(a);
  RealVector lam = eig.eigenvalues;
  if (f != MatrixFun::Exp && lam.minCoeff() <= 0.0) {
    throw std::domain_error("hpd_fun: matrix is not positive definite (min eigenvalue " +
                            std::to_string(lam.minCoeff()) + ")");
  }
  for (Index i = 0; i < lam.size(); ++i) {
    switch (f) {
      case MatrixFun::Log: lam[i] = std::log(lam[i]); break;
      case MatrixFun::Exp: lam[i] = std::exp(lam[i]); break;
      case MatrixFun::Sqrt: lam[i] = std::sqrt(lam[i]); break;
      case MatrixFun::InvSqrt: lam[i] = 1.0 / std::sqrt(lam[i]); break;
      case MatrixFun::Inverse: lam[i] = 1.0 / lam[i]; break;
    }
  }
  return herm_part(eig.eigenvectors * lam.asDiagonal() * eig.eigenvectors.adjoint());
}

ComplexMatrix hpd_fun(const HpdMatrix& a, MatrixFun f) { return hpd_fun(a.mat(), f); }

ComplexMatrix dlog_frechet(const HpdMatrix& a, const ComplexMatrix& h) {
  if (h.rows() != a.dim() || h.cols() != a.dim())
    throw std::invalid_argument("dlog_frechet: direction shape mismatch");
  require_hermitian(h, "dlog_frechet");
  HermitianEig eig = hermitian_eig(a.mat());
  const RealVector& lam = eig.eigenvalues;
  if (lam.minCoeff() <= 0.0)
    throw std::domain_error("dlog_frechet: base point is not positive definite");
  const double lmax = lam.maxCoeff();
  ComplexMatrix f = eig.eigenvectors.adjoint() * herm_part(h) * eig.eigenvectors;
  for (Index i = 0; i < lam.size(); ++i) {
    for (Index j = 0; j < lam.size(); ++j) {
      // Loewner weights; confluent branch once the gap is below roundoff scale.
      const double w = (std::abs(lam[i] - lam[j]) < 1e-8 * lmax)
                           ? 1.0 / lam[i]
                           : (std::log(lam[i]) - std::log(lam[j])) / (lam[i] - lam[j]);
      f(i, j) *= w;
    }
  }
  return herm_part(eig.eigenvectors * f * eig.eigenvectors.adjoint());
}

Complex frob_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("frob_inner: shape mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

ComplexMatrix log_inv_pair(const HpdMatrix& x, const HpdMatrix& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("log_inv_pair: dimension mismatch");
  HermitianEig eig = hermitian_eig(x.mat());
  RealVector lam = eig.eigenvalues;
  if (lam.minCoeff() <= 0.0) throw std::domain_error("log_inv_pair: X is not positive definite");
  RealVector inv_sqrt = lam.cwiseSqrt().cwiseInverse();
  ComplexMatrix xis = eig.eigenvectors * inv_sqrt.asDiagonal() * eig.eigenvectors.adjoint();
  ComplexMatrix xs = eig.eigenvectors * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors.adjoint();
  ComplexMatrix mid = hpd_fun(herm_part(xis * y.mat() * xis), MatrixFun::Log);
  return xis * mid * xs;
}

}  // namespace mig
