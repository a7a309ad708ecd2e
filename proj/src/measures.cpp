#include "mig/measures.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mig {

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::Airm: return "airm";
    case Measure::Lem: return "lem";
    case Measure::Jbld: return "jbld";
    case Measure::Skld: return "skld";
  }
  throw std::logic_error("measure_name: bad enum");
}

Measure parse_measure(std::string_view s) {
  if (s == "airm") return Measure::Airm;
  if (s == "lem") return Measure::Lem;
  if (s == "jbld") return Measure::Jbld;
  if (s == "skld") return Measure::Skld;
  throw std::invalid_argument("unknown measure '" + std::string(s) +
                              "' (expected airm, lem, jbld or skld)");
}

namespace {

double log_det_guarded(const ComplexMatrix& a, const char* what) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  const RealVector& lam = es.eigenvalues();
  if (lam.minCoeff() < 1e-14 * a.trace().real())
    throw std::runtime_error(std::string("sq_distance: ") + what +
                             " is numerically singular (min eigenvalue " +
                             std::to_string(lam.minCoeff()) + ")");
  double s = 0.0;
  for (Index i = 0; i < lam.size(); ++i) s += std::log(lam[i]);
  return s;
}

double airm_sq(const ComplexMatrix& x, const ComplexMatrix& y) {
  // Hermitian congruence reduction; never log of the non-normal product.
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> ges(
      y, x, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  const RealVector& lam = ges.eigenvalues();
  double s = 0.0;
  for (Index i = 0; i < lam.size(); ++i) {
    const double l = std::log(lam[i]);
    s += l * l;
  }
  return s;
}

double lem_sq(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (hpd_fun(x, MatrixFun::Log) - hpd_fun(y, MatrixFun::Log)).squaredNorm();
}

double jbld_sq(const ComplexMatrix& x, const ComplexMatrix& y) {
  const double mid = log_det_guarded(herm_part(0.5 * (x + y)), "(X+Y)/2");
  return mid - 0.5 * log_det_guarded(x, "X") - 0.5 * log_det_guarded(y, "Y");
}

double skld_sq(const ComplexMatrix& x, const ComplexMatrix& y) {
  Eigen::LLT<ComplexMatrix> lx(x), ly(y);
  if (lx.info() != Eigen::Success || ly.info() != Eigen::Success)
    throw std::runtime_error("sq_distance: skld operand is not positive definite");
  const double t = ly.solve(x).trace().real() + lx.solve(y).trace().real();
  return t - 2.0 * static_cast<double>(x.rows());
}

}  // namespace

double sq_distance_unchecked(Measure m, const ComplexMatrix& x, const ComplexMatrix& y) {
  switch (m) {
    case Measure::Airm: return airm_sq(x, y);
    case Measure::Lem: return lem_sq(x, y);
    case Measure::Jbld: return jbld_sq(x, y);
    case Measure::Skld: return skld_sq(x, y);
  }
  throw std::logic_error("sq_distance: bad enum");
}

double sq_distance(Measure m, const HpdMatrix& x, const HpdMatrix& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("sq_distance: dimension mismatch (" + std::to_string(x.dim()) +
                                " vs " + std::to_string(y.dim()) + ")");
  return sq_distance_unchecked(m, x.mat(), y.mat());
}

}  // namespace mig
