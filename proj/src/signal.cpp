#include "mig/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace mig {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double clutter_power(const ClutterModel& cm) { return cm.sigma_n2 * db_to_linear(cm.cnr_db); }

ComplexVector steering_vector(int n, double f_d) {
  if (n < 1) throw std::invalid_argument("steering_vector: need at least one pulse");
  ComplexVector s(n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (int k = 0; k < n; ++k) {
    const double ph = -2.0 * M_PI * f_d * k;
    s[k] = Complex(std::cos(ph), std::sin(ph)) * scale;
  }
  return s;
}

HpdMatrix build_hpd(const ComplexVector& y) {
  const Index n = y.size();
  if (n < 1) throw std::invalid_argument("build_hpd: empty pulse train");
  if (y.norm() == 0.0) throw std::invalid_argument("build_hpd: all-zero pulse train");
  ComplexVector r(n);
  for (Index l = 0; l < n; ++l) {
    Complex acc = 0.0;
    for (Index i = 0; i + l < n; ++i) acc += y[i] * std::conj(y[i + l]);
    r[l] = acc / double(n);
  }
  ComplexMatrix m = r * r.adjoint();
  m += r.squaredNorm() * ComplexMatrix::Identity(n, n);
  return HpdMatrix::trusted(m);
}

ComplexMatrix scm(const std::vector<ComplexVector>& ys) {
  if (ys.empty()) throw std::invalid_argument("scm: no samples");
  const Index n = ys.front().size();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& y : ys) {
    if (y.size() != n) throw std::invalid_argument("scm: mixed sample lengths");
    m += y * y.adjoint();
  }
  return m / double(ys.size());
}

HpdMatrix clutter_covariance(const ClutterModel& cm) {
  if (cm.n < 1) throw std::invalid_argument("clutter_covariance: need at least one pulse");
  if (!(cm.sigma_n2 > 0.0)) throw std::invalid_argument("clutter_covariance: sigma_n2 <= 0");
  if (!(cm.rho >= 0.0 && cm.rho < 1.0))
    throw std::invalid_argument("clutter_covariance: rho must lie in [0, 1)");
  const double sc2 = clutter_power(cm);
  ComplexMatrix c(cm.n, cm.n);
  for (int i = 0; i < cm.n; ++i) {
    for (int j = 0; j < cm.n; ++j) {
      const double ph = 2.0 * M_PI * cm.f_c * double(i - j);
      c(i, j) = sc2 * std::pow(cm.rho, std::abs(i - j)) * Complex(std::cos(ph), std::sin(ph));
    }
    c(i, i) += cm.sigma_n2;
  }
  return HpdMatrix::trusted(c);
}

HpdMatrix interference_covariance(const HpdMatrix& c, const InterferenceModel& im,
                                  double sigma_n2) {
  ComplexVector s = steering_vector(int(c.dim()), im.f_i);
  const double power = sigma_n2 * db_to_linear(im.power_db);
  return HpdMatrix::trusted(c.mat() + power * (s * s.adjoint()));
}

HpdMatrix cut_covariance(const HpdMatrix& c, const CutModel& cut, RngStream& rng) {
  if (!(cut.tau > 0.0)) throw std::invalid_argument("cut_covariance: tau must be positive");
  if (cut.q_power < 0.0) throw std::invalid_argument("cut_covariance: negative q_power");
  ComplexMatrix ct = cut.tau * c.mat();
  if (cut.q_power > 0.0) {
    ComplexVector q(c.dim());
    for (Index i = 0; i < q.size(); ++i) q[i] = rng.cnormal();
    q *= std::sqrt(cut.q_power) / q.norm();
    ct += q * q.adjoint();
  }
  return HpdMatrix::trusted(ct);
}

GaussianSampler::GaussianSampler(const HpdMatrix& c) : sqrt_c_(hpd_fun(c, MatrixFun::Sqrt)) {}

ComplexVector GaussianSampler::draw(RngStream& rng) const {
  ComplexVector z(sqrt_c_.rows());
  for (Index i = 0; i < z.size(); ++i) z[i] = rng.cnormal();
  return sqrt_c_ * z;
}

std::vector<ComplexVector> sample_gaussian(const HpdMatrix& c, int count, RngStream& rng) {
  if (count < 0) throw std::invalid_argument("sample_gaussian: negative count");
  GaussianSampler sampler(c);
  std::vector<ComplexVector> ys;
  ys.reserve(size_t(count));
  for (int i = 0; i < count; ++i) ys.push_back(sampler.draw(rng));
  return ys;
}

double target_amplitude(double scr_db, const ComplexVector& s, const ComplexMatrix& secondary_scm) {
  Eigen::LLT<ComplexMatrix> llt(secondary_scm);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("target_amplitude: secondary SCM is not positive definite");
  const double denom = s.dot(llt.solve(s)).real();  // s^H M^{-1} s
  if (!(denom > 0.0)) throw std::runtime_error("target_amplitude: nonpositive quadratic form");
  return std::sqrt(db_to_linear(scr_db) / denom);
}

}  // namespace mig
