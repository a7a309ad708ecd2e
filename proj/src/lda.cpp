#include "mig/lda.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mig {

Index LabeledHpdSet::dim() const {
  if (signal_class.empty() && clutter_class.empty())
    throw std::invalid_argument("LabeledHpdSet: empty");
  return signal_class.empty() ? clutter_class.front().dim() : signal_class.front().dim();
}

const HpdMatrix& LabeledHpdSet::at(Index i) const {
  const Index m = Index(signal_class.size());
  return i < m ? signal_class[size_t(i)] : clutter_class[size_t(i - m)];
}

namespace {

void validate_set(const LabeledHpdSet& data) {
  if (data.signal_class.empty() || data.clutter_class.empty())
    throw std::invalid_argument("labeled set needs at least one matrix per class");
  const Index n = data.dim();
  for (Index i = 0; i < data.size(); ++i)
    if (data.at(i).dim() != n) throw std::invalid_argument("labeled set has mixed dimensions");
}

// Pairwise squared distances with the per-matrix pieces cached where the
// measure allows it.
RealMatrix pairwise_sq(const LabeledHpdSet& data, Measure m) {
  const Index t = data.size();
  RealMatrix d = RealMatrix::Zero(t, t);
  std::vector<ComplexMatrix> cache;
  if (m == Measure::Lem) {
    cache.reserve(size_t(t));
    for (Index i = 0; i < t; ++i) cache.push_back(hpd_fun(data.at(i), MatrixFun::Log));
  } else if (m == Measure::Skld) {
    cache.reserve(size_t(t));
    for (Index i = 0; i < t; ++i) cache.push_back(hpd_fun(data.at(i), MatrixFun::Inverse));
  }
  for (Index i = 0; i < t; ++i) {
    for (Index j = i + 1; j < t; ++j) {
      double v;
      switch (m) {
        case Measure::Lem: v = (cache[size_t(i)] - cache[size_t(j)]).squaredNorm(); break;
        case Measure::Skld:
          v = (cache[size_t(j)] * data.at(i).mat()).trace().real() +
              (cache[size_t(i)] * data.at(j).mat()).trace().real() -
              2.0 * double(data.dim());
          break;
        default: v = sq_distance_unchecked(m, data.at(i).mat(), data.at(j).mat());
      }
      d(i, j) = d(j, i) = v;
    }
  }
  return d;
}

std::vector<Index> nearest(const RealMatrix& d, Index anchor, const std::vector<Index>& pool,
                           Index count) {
  std::vector<Index> idx = pool;
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (d(anchor, a) != d(anchor, b)) return d(anchor, a) < d(anchor, b);
    return a < b;
  });
  idx.resize(size_t(std::min<Index>(count, Index(idx.size()))));
  return idx;
}

// Per-projection workspace shared by cost and gradient evaluations.
struct Projected {
  std::vector<ComplexMatrix> rw;   // R_i W
  std::vector<ComplexMatrix> p;    // W^H R_i W
  std::vector<ComplexMatrix> inv;  // p^{-1}
};

Projected project_all(const StiefelPoint& w, const LabeledHpdSet& data) {
  Projected out;
  const Index t = data.size();
  out.rw.reserve(size_t(t));
  out.p.reserve(size_t(t));
  out.inv.reserve(size_t(t));
  for (Index i = 0; i < t; ++i) {
    ComplexMatrix rw = data.at(i).mat() * w.mat();
    ComplexMatrix p = herm_part(w.mat().adjoint() * rw);
    Eigen::LLT<ComplexMatrix> llt(p);
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p, Eigen::EigenvaluesOnly);
      throw std::domain_error("projection lost positive definiteness (min eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    out.inv.push_back(llt.solve(ComplexMatrix::Identity(p.rows(), p.cols())));
    out.rw.push_back(std::move(rw));
    out.p.push_back(std::move(p));
  }
  return out;
}

ComplexMatrix pair_grad(Measure m, const Projected& pr, Index x, Index y) {
  const ComplexMatrix& px = pr.p[size_t(x)];
  const ComplexMatrix& py = pr.p[size_t(y)];
  const ComplexMatrix& rwx = pr.rw[size_t(x)];
  const ComplexMatrix& rwy = pr.rw[size_t(y)];
  const ComplexMatrix& ix = pr.inv[size_t(x)];
  const ComplexMatrix& iy = pr.inv[size_t(y)];
  switch (m) {
    case Measure::Airm: {
      ComplexMatrix l = log_inv_pair(HpdMatrix::trusted(px), HpdMatrix::trusted(py));
      return 4.0 * (rwy * (l * iy) - rwx * (l * ix));
    }
    case Measure::Lem: {
      ComplexMatrix d =
          hpd_fun(px, MatrixFun::Log) - hpd_fun(py, MatrixFun::Log);
      return 4.0 * (rwx * dlog_frechet(HpdMatrix::trusted(px), d) -
                    rwy * dlog_frechet(HpdMatrix::trusted(py), d));
    }
    case Measure::Jbld: {
      Eigen::LLT<ComplexMatrix> mid(herm_part(px + py));
      if (mid.info() != Eigen::Success)
        throw std::runtime_error("grad_sq_distance: projected midpoint is singular");
      ComplexMatrix mid_inv = mid.solve(ComplexMatrix::Identity(px.rows(), px.cols()));
      return 2.0 * (rwx + rwy) * mid_inv - rwx * ix - rwy * iy;
    }
    case Measure::Skld: {
      ComplexMatrix tx = iy - ix * py * ix;
      ComplexMatrix ty = ix - iy * px * iy;
      return 2.0 * (rwx * tx + rwy * ty);
    }
  }
  throw std::logic_error("pair_grad: bad enum");
}

void write_u32(std::ostream& os, uint32_t v) {
  char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
               char((v >> 24) & 0xff)};
  os.write(b, 4);
}

void write_u64(std::ostream& os, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

void write_f64(std::ostream& os, double v) {
  static_assert(sizeof(double) == 8);
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(os, bits);
}

uint32_t read_u32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error("projection file truncated: " + path);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

uint64_t read_u64(std::istream& is, const std::string& path) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    throw std::runtime_error("projection file truncated: " + path);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
  return v;
}

double read_f64(std::istream& is, const std::string& path) {
  uint64_t bits = read_u64(is, path);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

NeighborLists select_neighbors(const LabeledHpdSet& data, const NeighborSpec& spec) {
  validate_set(data);
  if (spec.nu_within < 0 || spec.nu_between < 0)
    throw std::invalid_argument("select_neighbors: negative neighbor count");
  const Index t = data.size();
  RealMatrix d = pairwise_sq(data, spec.measure);

  NeighborLists nb;
  nb.within.resize(size_t(t));
  nb.between.resize(size_t(t));
  for (Index a = 0; a < t; ++a) {
    std::vector<Index> same, other;
    for (Index i = 0; i < t; ++i) {
      if (i == a) continue;  // anchors never neighbor themselves
      (data.is_signal(i) == data.is_signal(a) ? same : other).push_back(i);
    }
    nb.within[size_t(a)] = nearest(d, a, same, spec.nu_within);
    nb.between[size_t(a)] = nearest(d, a, other, spec.nu_between);
  }
  return nb;
}

double cost_psi(const StiefelPoint& w, const LabeledHpdSet& data, const NeighborLists& nb,
                Measure m) {
  validate_set(data);
  if (nb.within.size() != size_t(data.size()) || nb.between.size() != size_t(data.size()))
    throw std::invalid_argument("cost_psi: neighbor lists do not match the data");
  Projected pr = project_all(w, data);
  double within = 0.0, between = 0.0;
  for (Index a = 0; a < data.size(); ++a) {
    for (Index j : nb.within[size_t(a)])
      within += sq_distance_unchecked(m, pr.p[size_t(a)], pr.p[size_t(j)]);
    for (Index j : nb.between[size_t(a)])
      between += sq_distance_unchecked(m, pr.p[size_t(a)], pr.p[size_t(j)]);
  }
  return within - between;
}

ComplexMatrix grad_sq_distance(Measure m, const StiefelPoint& w, const HpdMatrix& x,
                               const HpdMatrix& y) {
  if (x.dim() != w.rows() || y.dim() != w.rows())
    throw std::invalid_argument("grad_sq_distance: dimension mismatch");
  LabeledHpdSet tmp;
  tmp.signal_class = {x};
  tmp.clutter_class = {y};
  Projected pr = project_all(w, tmp);
  return pair_grad(m, pr, 0, 1);
}

ComplexMatrix psi_euclidean_gradient(const StiefelPoint& w, const LabeledHpdSet& data,
                                     const NeighborLists& nb, Measure m) {
  validate_set(data);
  Projected pr = project_all(w, data);
  ComplexMatrix g = ComplexMatrix::Zero(w.rows(), w.cols());
  for (Index a = 0; a < data.size(); ++a) {
    for (Index j : nb.within[size_t(a)]) g += pair_grad(m, pr, a, j);
    for (Index j : nb.between[size_t(a)]) g -= pair_grad(m, pr, a, j);
  }
  return g;
}

Projection learn_projection(const LabeledHpdSet& data, const NeighborSpec& spec,
                            Index target_dim, const RgdOptions& opts) {
  validate_set(data);
  const Index n = data.dim();
  if (target_dim < 1 || target_dim > n)
    throw std::invalid_argument("learn_projection: target dimension out of range");

  NeighborLists nb = select_neighbors(data, spec);
  StiefelPoint w0 = random_stiefel(n, target_dim, opts.seed);
  auto cost = [&](const StiefelPoint& w) { return cost_psi(w, data, nb, spec.measure); };
  auto egrad = [&](const StiefelPoint& w) {
    return psi_euclidean_gradient(w, data, nb, spec.measure);
  };
  RgdResult res = rgd_minimize(cost, egrad, w0, opts);

  Projection p;
  p.w = res.point;
  p.measure = spec.measure;
  p.meta.seed = opts.seed;
  p.meta.iterations = res.iterations;
  p.meta.final_cost = res.cost_trace.back();
  p.meta.grad_norm = res.grad_norm;
  p.meta.stalled = res.stalled;
  return p;
}

void save_projection(const Projection& p, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open projection file for writing: " + path);
  os.write("MIGW1", 5);
  write_u32(os, uint32_t(p.w.rows()));
  write_u32(os, uint32_t(p.w.cols()));
  os.put(char(static_cast<int>(p.measure)));
  for (Index j = 0; j < p.w.cols(); ++j) {
    for (Index i = 0; i < p.w.rows(); ++i) {
      write_f64(os, p.w.mat()(i, j).real());
      write_f64(os, p.w.mat()(i, j).imag());
    }
  }
  write_u64(os, p.meta.seed);
  if (!os) throw std::runtime_error("failed writing projection file: " + path);
}

Projection load_projection(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open projection file: " + path);
  char magic[5];
  if (!is.read(magic, 5) || std::memcmp(magic, "MIGW1", 5) != 0)
    throw std::runtime_error("not a MIGW1 projection file: " + path);
  const uint32_t n = read_u32(is, path);
  const uint32_t m = read_u32(is, path);
  if (n == 0 || m == 0 || m > n || n > 65536)
    throw std::runtime_error("projection file has invalid shape " + std::to_string(n) + "x" +
                             std::to_string(m) + ": " + path);
  const int tag = is.get();
  if (tag < 0 || tag > 3)
    throw std::runtime_error("projection file has unknown measure tag: " + path);
  ComplexMatrix w(n, m);
  for (uint32_t j = 0; j < m; ++j) {
    for (uint32_t i = 0; i < n; ++i) {
      const double re = read_f64(is, path);
      const double im = read_f64(is, path);
      w(i, j) = Complex(re, im);
    }
  }
  const uint64_t seed = read_u64(is, path);
  is.peek();
  if (!is.eof()) throw std::runtime_error("projection file has trailing bytes: " + path);

  Projection p;
  p.w = StiefelPoint(w);  // validates orthonormality
  p.measure = static_cast<Measure>(tag);
  p.meta.seed = seed;
  return p;
}

}  // namespace mig
