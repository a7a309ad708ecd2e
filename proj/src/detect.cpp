#include "mig/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mig {

void DetectorSpec::validate() const {
  if (kind == DetectorKind::LdaMig && !projection)
    throw std::invalid_argument("detector lda_mig needs a projection");
  if (kind == DetectorKind::LdaMig && projection->measure != measure)
    throw std::invalid_argument("detector measure disagrees with the projection file");
}

std::string DetectorSpec::name() const {
  switch (kind) {
    case DetectorKind::Amf: return "amf";
    case DetectorKind::Ace: return "ace";
    case DetectorKind::Mtd: return "mtd";
    case DetectorKind::Mig: return std::string("mig_") + std::string(measure_name(measure));
    case DetectorKind::LdaMig: return std::string("lda_") + std::string(measure_name(measure));
  }
  throw std::logic_error("DetectorSpec::name: bad enum");
}

double mig_statistic(Measure m, const HpdMatrix& r_d, const HpdMatrix& r_g) {
  return sq_distance(m, r_d, r_g);
}

double lda_mig_statistic(const Projection& proj, const HpdMatrix& r_d, const HpdMatrix& r_g) {
  if (r_d.dim() != proj.w.rows() || r_g.dim() != proj.w.rows())
    throw std::invalid_argument("lda_mig_statistic: matrix size does not match the projection");
  const ComplexMatrix& w = proj.w.mat();
  ComplexMatrix pd = herm_part(w.adjoint() * r_d.mat() * w);
  ComplexMatrix pg = herm_part(w.adjoint() * r_g.mat() * w);
  return sq_distance_unchecked(proj.measure, pd, pg);
}

namespace {

Eigen::FullPivLU<ComplexMatrix> invertible_lu(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!lu.isInvertible())
    throw std::runtime_error(std::string(who) + ": covariance estimate is rank deficient (rank " +
                             std::to_string(lu.rank()) + " of " + std::to_string(m.rows()) + ")");
  return lu;
}

}  // namespace

double amf_statistic(const ComplexVector& y_d, const ComplexVector& s, const ComplexMatrix& m_hat) {
  if (y_d.size() != s.size() || m_hat.rows() != s.size())
    throw std::invalid_argument("amf_statistic: shape mismatch");
  auto lu = invertible_lu(m_hat, "amf_statistic");
  const ComplexVector ms = lu.solve(s);
  const double denom = s.dot(ms).real();
  if (!(denom > 0.0)) throw std::runtime_error("amf_statistic: nonpositive whitened power");
  return std::norm(y_d.dot(ms)) / denom;
}

double ace_statistic(const ComplexVector& y_d, const ComplexVector& s, const ComplexMatrix& m_hat) {
  if (y_d.size() != s.size() || m_hat.rows() != s.size())
    throw std::invalid_argument("ace_statistic: shape mismatch");
  auto lu = invertible_lu(m_hat, "ace_statistic");
  const ComplexVector ms = lu.solve(s);
  const ComplexVector my = lu.solve(y_d);
  const double ss = s.dot(ms).real();
  const double yy = y_d.dot(my).real();
  if (!(ss > 0.0) || !(yy > 0.0)) throw std::runtime_error("ace_statistic: nonpositive whitened power");
  return std::norm(y_d.dot(ms)) / (ss * yy);
}

double mtd_statistic(const ComplexVector& y_d, const ComplexVector& s) {
  if (y_d.size() != s.size()) throw std::invalid_argument("mtd_statistic: shape mismatch");
  return std::norm(s.dot(y_d));
}

ComplexMatrix trace_normalized(const ComplexMatrix& m) {
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("trace_normalized: nonpositive trace");
  return m * (double(m.rows()) / tr);
}

CalibratedThreshold calibrate_threshold(const std::vector<double>& h0_stats, double pfa) {
  if (!(pfa > 0.0 && pfa <= 1.0))
    throw std::invalid_argument("calibrate_threshold: pfa must lie in (0, 1]");
  const long long n = (long long)h0_stats.size();
  if (n == 0) throw std::invalid_argument("calibrate_threshold: no null statistics");

  CalibratedThreshold out;
  out.pfa_target = pfa;
  out.trials_used = n;
  out.under_recommended = double(n) * pfa < 100.0;
  if (double(n) * pfa < 1.0)
    throw std::invalid_argument("calibrate_threshold: need at least 1/pfa null trials, got " +
                                std::to_string(n));

  // floor(pfa * n) null statistics are allowed above the threshold; the
  // long-double product keeps near-integer values from rounding down.
  long long c = (long long)std::floor((long double)pfa * (long double)n + 1e-9L);
  if (c >= n) {
    out.gamma = -std::numeric_limits<double>::infinity();
    return out;
  }
  std::vector<double> sorted = h0_stats;
  std::sort(sorted.begin(), sorted.end());
  out.gamma = sorted[size_t(n - 1 - c)];
  return out;
}

PdEstimate estimate_pd(const std::vector<double>& h1_stats, double gamma) {
  if (h1_stats.empty()) throw std::invalid_argument("estimate_pd: no statistics");
  const double n = double(h1_stats.size());
  double hits = 0.0;
  for (double v : h1_stats)
    if (v > gamma) hits += 1.0;
  PdEstimate out;
  out.pd = hits / n;
  out.se = std::sqrt(out.pd * (1.0 - out.pd) / n);
  return out;
}

}  // namespace mig
