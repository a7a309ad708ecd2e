#include "mig/influence.hpp"

#include <cmath>
#include <stdexcept>

namespace mig {

namespace {

void validate_scenario(const OutlierScenario& sc) {
  if (sc.base.empty()) throw std::invalid_argument("influence: base family is empty");
  if (sc.outliers.empty()) throw std::invalid_argument("influence: outlier family is empty");
  const Index n = sc.base.front().dim();
  for (const auto& r : sc.base)
    if (r.dim() != n) throw std::invalid_argument("influence: mixed base dimensions");
  for (const auto& p : sc.outliers)
    if (p.dim() != n) throw std::invalid_argument("influence: outlier dimension mismatch");
}

ComplexMatrix inverse_hpd(const ComplexMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("influence: matrix not positive definite");
  return llt.solve(ComplexMatrix::Identity(a.rows(), a.cols()));
}

ComplexMatrix solve_left(const ComplexMatrix& t, const ComplexMatrix& rhs, const char* what) {
  Eigen::FullPivLU<ComplexMatrix> lu(t);
  if (!lu.isInvertible())
    throw std::runtime_error(std::string("influence: ") + what + " factor is singular");
  return lu.solve(rhs);
}

MeanOptions base_mean_options() {
  MeanOptions o;
  o.max_iter = 200;
  o.rel_tol = 1e-10;
  return o;
}

ComplexMatrix airm_influence(const HpdMatrix& mean, const OutlierScenario& sc) {
  const double j = double(sc.outliers.size());
  ComplexMatrix h = ComplexMatrix::Zero(mean.dim(), mean.dim());
  for (const auto& p : sc.outliers) {
    ComplexMatrix l = log_inv_pair(p, mean);  // log(P^{-1} Rbar)
    h -= mean.mat() * l + l.adjoint() * mean.mat();
  }
  return h / (2.0 * j);
}

ComplexMatrix lem_influence(const HpdMatrix& mean, const OutlierScenario& sc) {
  const double j = double(sc.outliers.size());
  ComplexMatrix d = -hpd_fun(mean, MatrixFun::Log);
  for (const auto& p : sc.outliers) d += hpd_fun(p, MatrixFun::Log) / j;
  ComplexMatrix rh = hpd_fun(mean, MatrixFun::Sqrt);
  return rh * herm_part(d) * rh;
}

ComplexMatrix jbld_influence(const HpdMatrix& mean, const OutlierScenario& sc) {
  const double k = double(sc.base.size());
  const double j = double(sc.outliers.size());
  const ComplexMatrix rinv = hpd_fun(mean, MatrixFun::Inverse);
  const ComplexMatrix rinv2 = rinv * rinv;

  ComplexMatrix denom = ComplexMatrix::Zero(mean.dim(), mean.dim());
  for (const auto& rk : sc.base) {
    ComplexMatrix mk = inverse_hpd(herm_part(0.5 * (mean.mat() + rk.mat())));
    denom += rinv2 - 0.5 * mk * mk;
  }
  ComplexMatrix num = ComplexMatrix::Zero(mean.dim(), mean.dim());
  for (const auto& p : sc.outliers)
    num += rinv - inverse_hpd(herm_part(0.5 * (mean.mat() + p.mat())));

  // num * denom^{-1}, via denom^H X^H = num^H.
  ComplexMatrix h = solve_left(denom.adjoint(), num.adjoint(), "jbld curvature").adjoint();
  return (k / j) * h;
}

ComplexMatrix skld_influence(const HpdMatrix& mean, const OutlierScenario& sc) {
  const double k = double(sc.base.size());
  const double j = double(sc.outliers.size());
  ComplexMatrix a = ComplexMatrix::Zero(mean.dim(), mean.dim());
  for (const auto& rk : sc.base) a += inverse_hpd(rk.mat());
  ComplexMatrix t = a * mean.mat() + mean.mat() * a;

  ComplexMatrix rhs = ComplexMatrix::Zero(mean.dim(), mean.dim());
  for (const auto& p : sc.outliers)
    rhs += p.mat() - mean.mat() * inverse_hpd(p.mat()) * mean.mat();
  return (k / j) * solve_left(t, rhs, "skld sylvester");
}

// ---- numerical oracle: contamination-weighted means ----

struct WeightedFamily {
  std::vector<const HpdMatrix*> mats;
  std::vector<double> w;
};

WeightedFamily contaminated(const OutlierScenario& sc) {
  WeightedFamily f;
  const double wb = (1.0 - sc.epsilon) / double(sc.base.size());
  const double wo = sc.epsilon / double(sc.outliers.size());
  for (const auto& r : sc.base) {
    f.mats.push_back(&r);
    f.w.push_back(wb);
  }
  for (const auto& p : sc.outliers) {
    f.mats.push_back(&p);
    f.w.push_back(wo);
  }
  return f;
}

constexpr double kOracleTol = 1e-13;
constexpr int kOracleMaxIter = 500;

double weighted_cost(Measure m, const ComplexMatrix& r, const WeightedFamily& f) {
  double s = 0.0;
  for (size_t i = 0; i < f.mats.size(); ++i)
    s += f.w[i] * sq_distance_unchecked(m, r, f.mats[i]->mat());
  return s;
}

ComplexMatrix weighted_lem(const WeightedFamily& f) {
  ComplexMatrix s = ComplexMatrix::Zero(f.mats.front()->dim(), f.mats.front()->dim());
  for (size_t i = 0; i < f.mats.size(); ++i) s += f.w[i] * hpd_fun(*f.mats[i], MatrixFun::Log);
  return hpd_fun(herm_part(s), MatrixFun::Exp);
}

ComplexMatrix weighted_skld(const WeightedFamily& f) {
  const Index n = f.mats.front()->dim();
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  for (size_t i = 0; i < f.mats.size(); ++i) {
    a += f.w[i] * inverse_hpd(f.mats[i]->mat());
    b += f.w[i] * f.mats[i]->mat();
  }
  ComplexMatrix ah = hpd_fun(herm_part(a), MatrixFun::Sqrt);
  ComplexMatrix aih = hpd_fun(herm_part(a), MatrixFun::InvSqrt);
  return herm_part(aih * hpd_fun(herm_part(ah * b * ah), MatrixFun::Sqrt) * aih);
}

ComplexMatrix weighted_jbld(const WeightedFamily& f, const ComplexMatrix& init) {
  ComplexMatrix r = init;
  for (int it = 0; it < kOracleMaxIter; ++it) {
    ComplexMatrix t = ComplexMatrix::Zero(r.rows(), r.cols());
    for (size_t i = 0; i < f.mats.size(); ++i)
      t += f.w[i] * inverse_hpd(herm_part(0.5 * (r + f.mats[i]->mat())));
    ComplexMatrix cand = herm_part(inverse_hpd(herm_part(t)));
    const double rel = (cand - r).norm() / r.norm();
    r = cand;
    if (rel < kOracleTol) return r;
  }
  throw std::runtime_error("perturbation_oracle: weighted jbld mean did not converge");
}

ComplexMatrix weighted_airm(const WeightedFamily& f, const ComplexMatrix& init) {
  ComplexMatrix r = init;
  double tau = 1.0;
  double cost = weighted_cost(Measure::Airm, r, f);
  for (int it = 0; it < kOracleMaxIter; ++it) {
    HermitianEig eig = hermitian_eig(r);
    RealVector sq = eig.eigenvalues.cwiseSqrt();
    ComplexMatrix rh = eig.eigenvectors * sq.asDiagonal() * eig.eigenvectors.adjoint();
    ComplexMatrix rih =
        eig.eigenvectors * sq.cwiseInverse().asDiagonal() * eig.eigenvectors.adjoint();
    ComplexMatrix s = ComplexMatrix::Zero(r.rows(), r.cols());
    for (size_t i = 0; i < f.mats.size(); ++i)
      s += f.w[i] * hpd_fun(herm_part(rih * f.mats[i]->mat() * rih), MatrixFun::Log);

    bool accepted = false;
    ComplexMatrix cand;
    double cost_new = cost;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      cand = herm_part(rh * hpd_fun(ComplexMatrix(tau * s), MatrixFun::Exp) * rh);
      cost_new = weighted_cost(Measure::Airm, cand, f);
      if (cost_new <= cost + 1e-15 * std::max(1.0, cost))
        accepted = true;
      else
        tau *= 0.5;
    }
    if (!accepted) throw std::runtime_error("perturbation_oracle: weighted airm step stalled");
    const double rel = (cand - r).norm() / r.norm();
    r = cand;
    cost = cost_new;
    if (rel < kOracleTol) return r;
  }
  throw std::runtime_error("perturbation_oracle: weighted airm mean did not converge");
}

HpdMatrix base_estimate(Estimator est, const OutlierScenario& sc, bool* converged) {
  if (est == Estimator::Scm) {
    if (converged) *converged = true;
    return arithmetic_mean_hpd(sc.base);
  }
  Measure m = static_cast<Measure>(est);
  MeanResult res = geometric_mean(m, sc.base, base_mean_options());
  if (converged) *converged = res.converged;
  return res.mean;
}

}  // namespace

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Airm: return "airm";
    case Estimator::Lem: return "lem";
    case Estimator::Jbld: return "jbld";
    case Estimator::Skld: return "skld";
    case Estimator::Scm: return "scm";
  }
  throw std::logic_error("estimator_name: bad enum");
}

Estimator to_estimator(Measure m) { return static_cast<Estimator>(m); }

InfluenceEval influence_eval(Estimator est, const OutlierScenario& sc) {
  validate_scenario(sc);
  InfluenceEval out;
  if (est == Estimator::Scm) {
    out.mean_converged = true;
    out.h = arithmetic_mean_hpd(sc.outliers).mat() - arithmetic_mean_hpd(sc.base).mat();
    return out;
  }
  HpdMatrix mean = base_estimate(est, sc, &out.mean_converged);
  ComplexMatrix h;
  switch (est) {
    case Estimator::Airm: h = airm_influence(mean, sc); break;
    case Estimator::Lem: h = lem_influence(mean, sc); break;
    case Estimator::Jbld: h = jbld_influence(mean, sc); break;
    case Estimator::Skld: h = skld_influence(mean, sc); break;
    case Estimator::Scm: break;
  }
  out.h = herm_part(h);
  return out;
}

ComplexMatrix influence_matrix(Estimator est, const OutlierScenario& sc) {
  return influence_eval(est, sc).h;
}

double influence_value(Estimator est, const OutlierScenario& sc) {
  return influence_eval(est, sc).h.norm();
}

ComplexMatrix perturbation_oracle(Estimator est, const OutlierScenario& sc) {
  validate_scenario(sc);
  if (!(sc.epsilon > 0.0 && sc.epsilon <= 0.1))
    throw std::invalid_argument("perturbation_oracle: epsilon must lie in (0, 0.1]");

  if (est == Estimator::Scm) {
    ComplexMatrix base = arithmetic_mean_hpd(sc.base).mat();
    ComplexMatrix out = arithmetic_mean_hpd(sc.outliers).mat();
    // The arithmetic mean is linear in the weights, so the quotient is exact.
    return out - base;
  }

  bool conv = false;
  HpdMatrix mean = base_estimate(est, sc, &conv);
  if (!conv) throw std::runtime_error("perturbation_oracle: base mean did not converge");

  WeightedFamily f = contaminated(sc);
  ComplexMatrix perturbed;
  switch (est) {
    case Estimator::Airm: perturbed = weighted_airm(f, mean.mat()); break;
    case Estimator::Lem: perturbed = weighted_lem(f); break;
    case Estimator::Jbld: perturbed = weighted_jbld(f, mean.mat()); break;
    case Estimator::Skld: perturbed = weighted_skld(f); break;
    case Estimator::Scm: break;
  }
  return herm_part((perturbed - mean.mat()) / sc.epsilon);
}

}  // namespace mig
