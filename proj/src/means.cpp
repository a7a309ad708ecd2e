#include "mig/means.hpp"

#include <cmath>
#include <stdexcept>

namespace mig {

namespace {

void validate_family(const std::vector<HpdMatrix>& rs, const char* who) {
  if (rs.empty()) throw std::invalid_argument(std::string(who) + ": empty input family");
  const Index n = rs.front().dim();
  for (const auto& r : rs)
    if (r.dim() != n) throw std::invalid_argument(std::string(who) + ": mixed dimensions");
}

ComplexMatrix initial_guess(const std::vector<HpdMatrix>& rs, MeanOptions::Init init) {
  if (init == MeanOptions::Init::LogEuclidean) {
    ComplexMatrix s = ComplexMatrix::Zero(rs.front().dim(), rs.front().dim());
    for (const auto& r : rs) s += hpd_fun(r, MatrixFun::Log);
    return hpd_fun(herm_part(s / double(rs.size())), MatrixFun::Exp);
  }
  return arithmetic_mean_hpd(rs).mat();
}

ComplexMatrix inverse_hpd(const ComplexMatrix& a) {
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("geometric_mean: iterate lost positive definiteness");
  return llt.solve(ComplexMatrix::Identity(a.rows(), a.cols()));
}

MeanResult finish(Measure m, const ComplexMatrix& r, const std::vector<HpdMatrix>& rs,
                  int iters, bool converged, std::vector<double> trace) {
  MeanResult out;
  out.mean = HpdMatrix::trusted(r);
  out.iterations = iters;
  out.converged = converged;
  out.residual = mean_residual(m, out.mean, rs);
  out.cost_trace = std::move(trace);
  return out;
}

MeanResult airm_mean(const std::vector<HpdMatrix>& rs, const MeanOptions& opts) {
  const int k = int(rs.size());
  const Index n = rs.front().dim();
  double eta = opts.step_eta.value_or((2.0 * k - 1.0) / (2.0 * k));
  if (!(eta > 0.0)) throw std::invalid_argument("geometric_mean: step_eta must be positive");
  const double eta_floor = 1.0 / k;

  ComplexMatrix r = initial_guess(rs, opts.init);
  double cost = mean_cost(Measure::Airm, r, rs);
  std::vector<double> trace;
  if (opts.track_cost) trace.push_back(cost);

  bool converged = false;
  int iters = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    HermitianEig eig = hermitian_eig(r);
    RealVector sq = eig.eigenvalues.cwiseSqrt();
    ComplexMatrix rh = eig.eigenvectors * sq.asDiagonal() * eig.eigenvectors.adjoint();
    ComplexMatrix rih = eig.eigenvectors * sq.cwiseInverse().asDiagonal() * eig.eigenvectors.adjoint();

    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (const auto& rk : rs) s += hpd_fun(herm_part(rih * rk.mat() * rih), MatrixFun::Log);

    // Cost-guarded step: accept only if the Karcher objective does not grow.
    bool accepted = false;
    ComplexMatrix cand;
    double cost_new = cost;
    for (int bt = 0; bt < 40 && !accepted; ++bt) {
      cand = herm_part(rh * hpd_fun(ComplexMatrix(eta * s), MatrixFun::Exp) * rh);
      cost_new = mean_cost(Measure::Airm, cand, rs);
      if (cost_new <= cost + 1e-14 * std::max(1.0, cost)) {
        accepted = true;
      } else {
        eta = (eta > eta_floor + 1e-12) ? 0.5 * (eta + eta_floor) : 0.5 * eta;
      }
    }
    if (!accepted) break;

    const double rel = (cand - r).norm() / r.norm();
    r = cand;
    cost = cost_new;
    iters = it;
    if (opts.track_cost) trace.push_back(cost);
    if (rel < opts.rel_tol) {
      converged = true;
      break;
    }
  }
  return finish(Measure::Airm, r, rs, iters, converged, std::move(trace));
}

MeanResult jbld_mean(const std::vector<HpdMatrix>& rs, const MeanOptions& opts) {
  const double k = double(rs.size());
  ComplexMatrix r = initial_guess(rs, opts.init);
  std::vector<double> trace;
  if (opts.track_cost) trace.push_back(mean_cost(Measure::Jbld, r, rs));

  bool converged = false;
  int iters = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    ComplexMatrix t = ComplexMatrix::Zero(r.rows(), r.cols());
    for (const auto& rk : rs) t += inverse_hpd(herm_part(0.5 * (r + rk.mat())));
    ComplexMatrix cand = herm_part(inverse_hpd(herm_part(t / k)));
    const double rel = (cand - r).norm() / r.norm();
    r = cand;
    iters = it;
    if (opts.track_cost) trace.push_back(mean_cost(Measure::Jbld, r, rs));
    if (rel < opts.rel_tol) {
      converged = true;
      break;
    }
  }
  return finish(Measure::Jbld, r, rs, iters, converged, std::move(trace));
}

MeanResult lem_mean(const std::vector<HpdMatrix>& rs, const MeanOptions& opts) {
  ComplexMatrix s = ComplexMatrix::Zero(rs.front().dim(), rs.front().dim());
  for (const auto& rk : rs) s += hpd_fun(rk, MatrixFun::Log);
  ComplexMatrix r = hpd_fun(herm_part(s / double(rs.size())), MatrixFun::Exp);
  std::vector<double> trace;
  if (opts.track_cost) trace.push_back(mean_cost(Measure::Lem, r, rs));
  return finish(Measure::Lem, r, rs, 1, true, std::move(trace));
}

MeanResult skld_mean(const std::vector<HpdMatrix>& rs, const MeanOptions& opts) {
  const Index n = rs.front().dim();
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  for (const auto& rk : rs) {
    a += inverse_hpd(rk.mat());
    b += rk.mat();
  }
  // Solves R A R = B, the stationarity condition of the symmetrized divergence.
  ComplexMatrix ah = hpd_fun(herm_part(a), MatrixFun::Sqrt);
  ComplexMatrix aih = hpd_fun(herm_part(a), MatrixFun::InvSqrt);
  ComplexMatrix mid = hpd_fun(herm_part(ah * b * ah), MatrixFun::Sqrt);
  ComplexMatrix r = herm_part(aih * mid * aih);
  std::vector<double> trace;
  if (opts.track_cost) trace.push_back(mean_cost(Measure::Skld, r, rs));
  return finish(Measure::Skld, r, rs, 1, true, std::move(trace));
}

}  // namespace

MeanResult geometric_mean(Measure m, const std::vector<HpdMatrix>& rs, const MeanOptions& opts) {
  validate_family(rs, "geometric_mean");
  if (rs.size() == 1) {
    MeanResult out;
    out.mean = rs.front();
    out.iterations = 0;
    out.converged = true;
    out.residual = 0.0;
    if (opts.track_cost) out.cost_trace.push_back(0.0);
    return out;
  }
  switch (m) {
    case Measure::Airm: return airm_mean(rs, opts);
    case Measure::Lem: return lem_mean(rs, opts);
    case Measure::Jbld: return jbld_mean(rs, opts);
    case Measure::Skld: return skld_mean(rs, opts);
  }
  throw std::logic_error("geometric_mean: bad enum");
}

ComplexMatrix arithmetic_mean(const std::vector<ComplexMatrix>& as) {
  if (as.empty()) throw std::invalid_argument("arithmetic_mean: empty input");
  ComplexMatrix s = ComplexMatrix::Zero(as.front().rows(), as.front().cols());
  for (const auto& a : as) {
    if (a.rows() != s.rows() || a.cols() != s.cols())
      throw std::invalid_argument("arithmetic_mean: mixed shapes");
    s += a;
  }
  return s / double(as.size());
}

HpdMatrix arithmetic_mean_hpd(const std::vector<HpdMatrix>& rs) {
  validate_family(rs, "arithmetic_mean");
  ComplexMatrix s = ComplexMatrix::Zero(rs.front().dim(), rs.front().dim());
  for (const auto& r : rs) s += r.mat();
  return HpdMatrix::trusted(s / double(rs.size()));
}

double mean_cost(Measure m, const ComplexMatrix& mean, const std::vector<HpdMatrix>& rs) {
  double s = 0.0;
  for (const auto& r : rs) s += sq_distance_unchecked(m, mean, r.mat());
  return s / double(rs.size());
}

double mean_residual(Measure m, const HpdMatrix& mean, const std::vector<HpdMatrix>& rs) {
  validate_family(rs, "mean_residual");
  const Index n = mean.dim();
  const double k = double(rs.size());
  switch (m) {
    case Measure::Airm: {
      ComplexMatrix rih = hpd_fun(mean, MatrixFun::InvSqrt);
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      for (const auto& rk : rs) s += hpd_fun(herm_part(rih * rk.mat() * rih), MatrixFun::Log);
      return (s / k).norm();
    }
    case Measure::Lem: {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      for (const auto& rk : rs) s += hpd_fun(rk, MatrixFun::Log);
      return (hpd_fun(mean, MatrixFun::Log) - s / k).norm();
    }
    case Measure::Jbld: {
      ComplexMatrix rinv = hpd_fun(mean, MatrixFun::Inverse);
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      for (const auto& rk : rs)
        s += inverse_hpd(herm_part(0.5 * (mean.mat() + rk.mat()))) - rinv;
      return (s / (2.0 * k)).norm();
    }
    case Measure::Skld: {
      ComplexMatrix rinv = hpd_fun(mean, MatrixFun::Inverse);
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      for (const auto& rk : rs)
        s += inverse_hpd(rk.mat()) - rinv * rk.mat() * rinv;
      return (s / (2.0 * k)).norm();
    }
  }
  throw std::logic_error("mean_residual: bad enum");
}

}  // namespace mig
