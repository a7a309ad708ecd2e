#include "mig/experiment.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include "mig/parallel.hpp"

namespace mig {

namespace {

// Phase tags for substream derivation. Every Monte Carlo phase owns a tag so
// no two phases ever consume the same stream.
constexpr uint64_t kTagRobust = 0x524f4255;
constexpr uint64_t kTagTrial = 0x5452494c;
constexpr uint64_t kTagCal = 0x43414c49;
constexpr uint64_t kTagPd = 0x50445452;
constexpr uint64_t kTagPfaCheck = 0x50464143;
constexpr uint64_t kTagTrainSignal = 0x54524e53;
constexpr uint64_t kTagTrainClutter = 0x54524e43;
constexpr uint64_t kTagLearn = 0x4c45524e;
constexpr uint64_t kTagScatter = 0x53434154;

std::string fmt_g(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.10g", v);
  return b;
}

void write_model_header(std::ostream& os, const ExperimentConfig& cfg) {
  os << "# seed = " << cfg.master_seed << "\n";
  os << "# pulses = " << cfg.clutter.n << "\n";
  os << "# sigma_n2 = " << fmt_g(cfg.clutter.sigma_n2) << "\n";
  os << "# cnr_db = " << fmt_g(cfg.clutter.cnr_db) << "\n";
  os << "# rho = " << fmt_g(cfg.clutter.rho) << "\n";
  os << "# f_c = " << fmt_g(cfg.clutter.f_c) << "\n";
  os << "# f_d = " << fmt_g(cfg.target.f_d) << "\n";
  os << "# f_i = " << fmt_g(cfg.interference.f_i) << "\n";
  os << "# interference_power_db = " << fmt_g(cfg.interference.power_db) << "\n";
  os << "# tau = " << fmt_g(cfg.cut.tau) << "\n";
  os << "# q_power = " << fmt_g(cfg.resolved_q_power()) << "\n";
}

double sample_se(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= double(v.size() - 1);
  return std::sqrt(var / double(v.size()));
}

int measure_index(Measure m) { return static_cast<int>(m); }

}  // namespace

RobustnessResult run_robustness(const ExperimentConfig& cfg) {
  cfg.validate();
  const HpdMatrix c = clutter_covariance(cfg.clutter);
  const HpdMatrix ci = interference_covariance(c, cfg.interference, cfg.clutter.sigma_n2);
  const GaussianSampler clutter_draw(c);
  const GaussianSampler interference_draw(ci);
  const RngStream master(cfg.master_seed);
  const int trials = cfg.robustness.trials;
  const int k = cfg.robustness.k;
  constexpr size_t ne = kAllEstimators.size();

  RobustnessResult out;
  out.trials = trials;
  std::array<long long, ne> nonconv{};

  for (size_t li = 0; li < cfg.robustness.l_values.size(); ++li) {
    const int l = cfg.robustness.l_values[li];
    if (l > k)
      throw std::invalid_argument("run_robustness: more outliers than base matrices (l = " +
                                  std::to_string(l) + ")");
    std::vector<std::array<double, ne>> vals(static_cast<size_t>(trials));
    std::vector<std::array<bool, ne>> conv(static_cast<size_t>(trials));

    parallel_for(trials, cfg.threads, [&](long long t) {
      RngStream st = master.derived(kTagRobust, li).derived(kTagTrial, uint64_t(t));
      auto& v = vals[size_t(t)];
      auto& cf = conv[size_t(t)];
      cf.fill(true);
      if (l == 0) {
        v.fill(0.0);  // no contamination, nothing to measure
        return;
      }
      OutlierScenario sc;
      sc.base.reserve(size_t(k));
      sc.outliers.reserve(size_t(l));
      for (int i = 0; i < k; ++i) sc.base.push_back(build_hpd(clutter_draw.draw(st)));
      for (int j = 0; j < l; ++j) sc.outliers.push_back(build_hpd(interference_draw.draw(st)));
      for (size_t e = 0; e < ne; ++e) {
        InfluenceEval ev = influence_eval(kAllEstimators[e], sc);
        v[e] = ev.h.norm();
        cf[e] = ev.mean_converged;
      }
    });

    for (size_t e = 0; e < ne; ++e) {
      std::vector<double> series(static_cast<size_t>(trials));
      for (int t = 0; t < trials; ++t) {
        series[size_t(t)] = vals[size_t(t)][e];
        if (!conv[size_t(t)][e]) ++nonconv[e];
      }
      double mean = 0.0;
      for (double x : series) mean += x;
      mean /= double(trials);
      out.rows.push_back(RobustnessRow{l, std::string(estimator_name(kAllEstimators[e])), mean,
                                       sample_se(series, mean)});
    }
  }

  const double total = double(trials) * double(cfg.robustness.l_values.size());
  for (size_t e = 0; e < ne; ++e) {
    if (double(nonconv[e]) > 0.01 * total)
      throw std::runtime_error("run_robustness: " +
                               std::string(estimator_name(kAllEstimators[e])) +
                               " mean failed to converge in " + std::to_string(nonconv[e]) +
                               " of " + std::to_string((long long)total) + " trials");
  }
  return out;
}

void write_robustness_csv(std::ostream& os, const ExperimentConfig& cfg,
                          const RobustnessResult& result) {
  os << "# mig robustness\n";
  write_model_header(os, cfg);
  os << "# k = " << cfg.robustness.k << "\n";
  os << "# trials = " << result.trials << "\n";
  os << "l,estimator,influence,se\n";
  for (const auto& r : result.rows)
    os << r.l << "," << r.estimator << "," << fmt_g(r.mean_influence) << "," << fmt_g(r.se)
       << "\n";
}

std::vector<DetectorSpec> resolve_detectors(const ExperimentConfig& cfg) {
  if (cfg.detectors.empty()) throw std::invalid_argument("no detectors configured");
  std::vector<DetectorSpec> dets;
  std::set<std::string> names;
  for (const auto& req : cfg.detectors) {
    DetectorSpec spec;
    spec.kind = req.kind;
    spec.measure = req.measure;
    if (req.kind == DetectorKind::LdaMig) {
      Projection proj = load_projection(req.projection_path);
      if (proj.measure != req.measure)
        throw std::runtime_error("projection " + req.projection_path + " was trained for " +
                                 std::string(measure_name(proj.measure)) + ", not " +
                                 std::string(measure_name(req.measure)));
      if (proj.w.rows() != cfg.clutter.n)
        throw std::runtime_error("projection " + req.projection_path + " expects " +
                                 std::to_string(proj.w.rows()) + " pulses, config has " +
                                 std::to_string(cfg.clutter.n));
      spec.projection = std::move(proj);
    }
    spec.validate();
    if (!names.insert(spec.name()).second)
      throw std::invalid_argument("duplicate detector '" + spec.name() + "'");
    dets.push_back(std::move(spec));
  }
  return dets;
}

namespace {

struct TrialOutput {
  std::vector<double> stats;
  std::array<bool, 4> mean_conv;
};

// Shared per-run state for detection trials. run() is const and every draw
// comes from the caller's stream, so trials are safe to run concurrently.
class PdEngine {
 public:
  PdEngine(const ExperimentConfig& cfg, const std::vector<DetectorSpec>& dets)
      : cfg_(cfg),
        dets_(dets),
        c_(clutter_covariance(cfg.clutter)),
        clutter_draw_(c_),
        interference_draw_(interference_covariance(c_, cfg.interference, cfg.clutter.sigma_n2)),
        s_(steering_vector(cfg.clutter.n, cfg.target.f_d)) {
    cut_ = cfg.cut;
    cut_.q_power = cfg.resolved_q_power();
    need_.fill(false);
    for (const auto& d : dets_)
      if (d.kind == DetectorKind::Mig || d.kind == DetectorKind::LdaMig)
        need_[size_t(measure_index(d.measure))] = true;
  }

  // scr_db == nullptr runs a null (target-free) trial.
  TrialOutput run(RngStream st, const double* scr_db) const {
    const int k = cfg_.k_secondary;
    const int l = cfg_.interference.count;
    std::vector<ComplexVector> sec;
    sec.reserve(size_t(k));
    for (int i = 0; i < l; ++i) sec.push_back(interference_draw_.draw(st));
    for (int i = l; i < k; ++i) sec.push_back(clutter_draw_.draw(st));
    const ComplexMatrix m_hat = scm(sec);

    const HpdMatrix ct = cut_covariance(c_, cut_, st);
    ComplexVector y = GaussianSampler(ct).draw(st);
    if (scr_db) y += target_amplitude(*scr_db, s_, m_hat) * s_;

    TrialOutput out;
    out.mean_conv.fill(true);
    HpdMatrix r_d;
    std::array<HpdMatrix, 4> r_g;
    const bool any_mig = need_[0] || need_[1] || need_[2] || need_[3];
    if (any_mig) {
      r_d = build_hpd(y);
      std::vector<HpdMatrix> hpds;
      hpds.reserve(sec.size());
      for (const auto& cell : sec) hpds.push_back(build_hpd(cell));
      for (int mi = 0; mi < 4; ++mi) {
        if (!need_[size_t(mi)]) continue;
        MeanResult res = geometric_mean(static_cast<Measure>(mi), hpds);
        r_g[size_t(mi)] = res.mean;
        out.mean_conv[size_t(mi)] = res.converged;
      }
    }

    out.stats.reserve(dets_.size());
    for (const auto& d : dets_) {
      switch (d.kind) {
        case DetectorKind::Amf: out.stats.push_back(amf_statistic(y, s_, m_hat)); break;
        case DetectorKind::Ace:
          out.stats.push_back(ace_statistic(y, s_, trace_normalized(m_hat)));
          break;
        case DetectorKind::Mtd: out.stats.push_back(mtd_statistic(y, s_)); break;
        case DetectorKind::Mig:
          out.stats.push_back(
              mig_statistic(d.measure, r_d, r_g[size_t(measure_index(d.measure))]));
          break;
        case DetectorKind::LdaMig:
          out.stats.push_back(
              lda_mig_statistic(*d.projection, r_d, r_g[size_t(measure_index(d.measure))]));
          break;
      }
    }
    return out;
  }

 private:
  const ExperimentConfig& cfg_;
  const std::vector<DetectorSpec>& dets_;
  HpdMatrix c_;
  GaussianSampler clutter_draw_;
  GaussianSampler interference_draw_;
  ComplexVector s_;
  CutModel cut_;
  std::array<bool, 4> need_{};
};

// Runs `count` trials of one phase into per-detector columns. `nonconv`
// accumulates how many geometric mean evaluations stopped at the iteration
// cap; the iterates are still used, so this is a diagnostic, not an error.
std::vector<std::vector<double>> run_phase(const PdEngine& engine, const RngStream& master,
                                           uint64_t tag, uint64_t tag_index, long long count,
                                           int threads, size_t ndet, const double* scr_db,
                                           long long* nonconv) {
  std::vector<std::vector<double>> stats(ndet, std::vector<double>(size_t(count)));
  std::vector<int> bad(static_cast<size_t>(count), 0);
  parallel_for(count, threads, [&](long long t) {
    TrialOutput out =
        engine.run(master.derived(tag, tag_index).derived(kTagTrial, uint64_t(t)), scr_db);
    for (size_t d = 0; d < ndet; ++d) stats[d][size_t(t)] = out.stats[d];
    int misses = 0;
    for (bool c : out.mean_conv)
      if (!c) ++misses;
    bad[size_t(t)] = misses;
  });
  if (nonconv)
    for (int m : bad) *nonconv += m;
  return stats;
}

}  // namespace

PdSimResult run_pd_sim(const ExperimentConfig& cfg, const std::vector<DetectorSpec>& dets) {
  cfg.validate();
  if (dets.empty()) throw std::invalid_argument("run_pd_sim: no detectors");
  if (cfg.scr_grid_db.empty()) throw std::invalid_argument("run_pd_sim: empty SCR grid");
  const long long cal_n = cfg.resolved_cal_trials();
  if (double(cal_n) * cfg.pfa < 1.0)
    throw std::invalid_argument("run_pd_sim: cal_trials must reach at least 1/pfa");

  PdEngine engine(cfg, dets);
  const RngStream master(cfg.master_seed);
  const size_t nd = dets.size();

  PdSimResult out;
  auto cal = run_phase(engine, master, kTagCal, 0, cal_n, cfg.threads, nd, nullptr, &out.nonconverged_means);
  out.thresholds.reserve(nd);
  for (size_t d = 0; d < nd; ++d) out.thresholds.push_back(calibrate_threshold(cal[d], cfg.pfa));
  cal.clear();
  cal.shrink_to_fit();

  for (size_t g = 0; g < cfg.scr_grid_db.size(); ++g) {
    const double scr = cfg.scr_grid_db[g];
    auto h1 = run_phase(engine, master, kTagPd, g, cfg.trials, cfg.threads, nd, &scr, &out.nonconverged_means);
    for (size_t d = 0; d < nd; ++d) {
      PdEstimate est = estimate_pd(h1[d], out.thresholds[d].gamma);
      out.rows.push_back({scr, dets[d].name(), out.thresholds[d].gamma, est.pd, est.se});
    }
  }
  return out;
}

std::vector<PdEstimate> run_pfa_check(const ExperimentConfig& cfg,
                                      const std::vector<DetectorSpec>& dets,
                                      const std::vector<double>& gammas, long long trials) {
  cfg.validate();
  if (gammas.size() != dets.size())
    throw std::invalid_argument("run_pfa_check: one threshold per detector required");
  if (trials < 1) throw std::invalid_argument("run_pfa_check: need at least one trial");
  PdEngine engine(cfg, dets);
  const RngStream master(cfg.master_seed);
  auto h0 = run_phase(engine, master, kTagPfaCheck, 0, trials, cfg.threads, dets.size(), nullptr, nullptr);
  std::vector<PdEstimate> out;
  out.reserve(dets.size());
  for (size_t d = 0; d < dets.size(); ++d) out.push_back(estimate_pd(h0[d], gammas[d]));
  return out;
}

void write_pd_csv(std::ostream& os, const ExperimentConfig& cfg,
                  const std::vector<DetectorSpec>& dets, const PdSimResult& result) {
  os << "# mig pd-sim\n";
  write_model_header(os, cfg);
  os << "# k_secondary = " << cfg.k_secondary << "\n";
  os << "# interference_count = " << cfg.interference.count << "\n";
  os << "# pfa = " << fmt_g(cfg.pfa) << "\n";
  os << "# cal_trials = " << cfg.resolved_cal_trials() << "\n";
  os << "# trials = " << cfg.trials << "\n";
  os << "# ace_normalization = trace\n";
  os << "# detectors =";
  for (size_t d = 0; d < dets.size(); ++d) os << (d ? "," : " ") << dets[d].name();
  os << "\n";
  os << "scr_db,detector,threshold,pd,se\n";
  for (const auto& r : result.rows)
    os << fmt_g(r.scr_db) << "," << r.detector << "," << fmt_g(r.threshold) << "," << fmt_g(r.pd)
       << "," << fmt_g(r.se) << "\n";
}

LabeledHpdSet make_training_set(const ExperimentConfig& cfg, Measure m, uint64_t seed) {
  cfg.validate();
  const RngStream root(seed);
  const HpdMatrix c = clutter_covariance(cfg.clutter);
  const GaussianSampler clutter_draw(c);
  const ComplexVector s = steering_vector(cfg.clutter.n, cfg.target.f_d);
  CutModel cut = cfg.cut;
  cut.q_power = cfg.resolved_q_power();
  const int k = cfg.resolved_training_k();
  const int per_class = cfg.training.per_class;

  LabeledHpdSet data;
  data.signal_class.resize(size_t(per_class));
  data.clutter_class.resize(size_t(per_class));

  parallel_for(per_class, cfg.threads, [&](long long i) {
    RngStream st = root.derived(kTagTrainSignal, uint64_t(i));
    std::vector<ComplexVector> sec;
    sec.reserve(size_t(k));
    for (int j = 0; j < k; ++j) sec.push_back(clutter_draw.draw(st));
    const double alpha = target_amplitude(cfg.training.scr_db, s, scm(sec));
    const HpdMatrix ct = cut_covariance(c, cut, st);
    ComplexVector y = GaussianSampler(ct).draw(st);
    y += alpha * s;
    data.signal_class[size_t(i)] = build_hpd(y);
  });
  parallel_for(per_class, cfg.threads, [&](long long i) {
    RngStream st = root.derived(kTagTrainClutter, uint64_t(i));
    std::vector<HpdMatrix> sec;
    sec.reserve(size_t(k));
    for (int j = 0; j < k; ++j) sec.push_back(build_hpd(clutter_draw.draw(st)));
    data.clutter_class[size_t(i)] = geometric_mean(m, sec).mean;
  });
  return data;
}

std::vector<LearnOutput> run_learn(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const uint64_t train_seed =
      cfg.training.seed != 0 ? cfg.training.seed : cfg.master_seed;
  // One shared data seed: the same draws feed every measure, so learned
  // projections differ only through the geometry.
  const uint64_t data_seed = RngStream(train_seed).derived(kTagLearn, 0).seed();

  std::vector<LearnOutput> outputs;
  for (size_t mi = 0; mi < cfg.training.measures.size(); ++mi) {
    const Measure m = cfg.training.measures[mi];
    LabeledHpdSet data = make_training_set(cfg, m, data_seed);
    NeighborSpec spec;
    spec.nu_within = cfg.training.nu_within;
    spec.nu_between = cfg.training.nu_between;
    spec.measure = m;
    for (int dim : cfg.training.target_dims) {
      RgdOptions opts;
      opts.max_iter = cfg.training.max_iter;
      opts.grad_tol = cfg.training.grad_tol;
      opts.seed =
          RngStream(train_seed).derived(kTagLearn, 1 + 16 * uint64_t(mi) + uint64_t(dim)).seed();
      LearnOutput lo;
      lo.projection = learn_projection(data, spec, dim, opts);
      lo.target_dim = dim;
      lo.filename =
          "proj_" + std::string(measure_name(m)) + "_m" + std::to_string(dim) + ".migw1";
      if (!out_dir.empty()) save_projection(lo.projection, out_dir + "/" + lo.filename);
      outputs.push_back(std::move(lo));
    }
  }
  return outputs;
}

namespace {

// Isometric real coordinates of a Hermitian matrix: diagonal, then sqrt(2)
// times the real and imaginary parts above the diagonal.
RealVector embed_hermitian(const ComplexMatrix& h) {
  const Index m = h.rows();
  RealVector v(m * m);
  Index at = 0;
  for (Index i = 0; i < m; ++i) v[at++] = h(i, i).real();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      v[at++] = M_SQRT2 * h(i, j).real();
      v[at++] = M_SQRT2 * h(i, j).imag();
    }
  }
  return v;
}

}  // namespace

DiscriminateResult run_discriminate(const ExperimentConfig& cfg, const Projection& proj) {
  cfg.validate();
  if (proj.w.rows() != cfg.clutter.n)
    throw std::invalid_argument("run_discriminate: projection expects " +
                                std::to_string(proj.w.rows()) + " pulses, config has " +
                                std::to_string(cfg.clutter.n));
  const HpdMatrix c = clutter_covariance(cfg.clutter);
  const GaussianSampler clutter_draw(c);
  const ComplexVector s = steering_vector(cfg.clutter.n, cfg.target.f_d);
  CutModel cut = cfg.cut;
  cut.q_power = cfg.resolved_q_power();
  const RngStream master(cfg.master_seed);
  const int per_class = cfg.discriminate.per_class;
  const auto& grid = cfg.discriminate.scr_grid_db;
  if (grid.empty()) throw std::invalid_argument("run_discriminate: empty SCR grid");

  if (proj.w.cols() < 2)
    throw std::invalid_argument(
        "run_discriminate: need a projected dimension of at least 2 for two principal components");
  const long long total = 2ll * (long long)grid.size() * per_class;
  const Index dim = proj.w.cols() * proj.w.cols();
  RealMatrix coords(total, dim);
  std::vector<int> labels(static_cast<size_t>(total));
  std::vector<double> scrs(static_cast<size_t>(total));

  parallel_for(total, cfg.threads, [&](long long idx) {
    const int label = int(idx / ((long long)grid.size() * per_class));
    const long long rem = idx % ((long long)grid.size() * per_class);
    const size_t g = size_t(rem / per_class);
    RngStream st = master.derived(kTagScatter, uint64_t(idx));

    ComplexVector y;
    if (label == 1) {
      std::vector<ComplexVector> sec;
      sec.reserve(size_t(cfg.k_secondary));
      for (int j = 0; j < cfg.k_secondary; ++j) sec.push_back(clutter_draw.draw(st));
      const double alpha = target_amplitude(grid[g], s, scm(sec));
      const HpdMatrix ct = cut_covariance(c, cut, st);
      y = GaussianSampler(ct).draw(st);
      y += alpha * s;
    } else {
      const HpdMatrix ct = cut_covariance(c, cut, st);
      y = GaussianSampler(ct).draw(st);
    }
    const HpdMatrix r = build_hpd(y);
    const ComplexMatrix& w = proj.w.mat();
    ComplexMatrix p = herm_part(w.adjoint() * r.mat() * w);
    coords.row(idx) = embed_hermitian(hpd_fun(p, MatrixFun::Log)).transpose();
    labels[size_t(idx)] = label;
    scrs[size_t(idx)] = grid[g];
  });

  // Top-2 principal components over the pooled coordinates, with a
  // deterministic sign convention.
  RealVector mean = coords.colwise().mean();
  RealMatrix centered = coords.rowwise() - mean.transpose();
  RealMatrix cov = centered.transpose() * centered / double(std::max<long long>(total - 1, 1));
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("run_discriminate: PCA factorization failed");
  DiscriminateResult out;
  out.rows.resize(size_t(total));
  RealMatrix pcs(dim, 2);
  pcs.col(0) = es.eigenvectors().col(dim - 1);
  pcs.col(1) = es.eigenvectors().col(dim - 2);
  for (int p = 0; p < 2; ++p) {
    Index at = 0;
    es.eigenvectors().col(dim - 1 - p).cwiseAbs().maxCoeff(&at);
    if (pcs(at, p) < 0.0) pcs.col(p) = -pcs.col(p);
  }
  RealMatrix scores = centered * pcs;
  for (long long i = 0; i < total; ++i)
    out.rows[size_t(i)] = ScatterRow{scores(i, 0), scores(i, 1), labels[size_t(i)], scrs[size_t(i)]};
  return out;
}

void write_scatter_csv(std::ostream& os, const ExperimentConfig& cfg, const Projection& proj,
                       const DiscriminateResult& result) {
  os << "# mig discriminate\n";
  write_model_header(os, cfg);
  os << "# k_secondary = " << cfg.k_secondary << "\n";
  os << "# measure = " << measure_name(proj.measure) << "\n";
  os << "# projection_shape = " << proj.w.rows() << "x" << proj.w.cols() << "\n";
  os << "# per_class = " << cfg.discriminate.per_class << "\n";
  os << "pc1,pc2,label,scr_db\n";
  for (const auto& r : result.rows)
    os << fmt_g(r.pc1) << "," << fmt_g(r.pc2) << "," << r.label << "," << fmt_g(r.scr_db) << "\n";
}

}  // namespace mig
