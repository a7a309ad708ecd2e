#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mig/config.hpp"
#include "mig/influence.hpp"

namespace mig {

// ---- robustness: Monte Carlo influence of interference outliers ----

struct RobustnessRow {
  int l = 0;
  std::string estimator;
  double mean_influence = 0.0;
  double se = 0.0;
};

struct RobustnessResult {
  std::vector<RobustnessRow> rows;  // ordered by l, then estimator
  int trials = 0;
};

RobustnessResult run_robustness(const ExperimentConfig& cfg);
void write_robustness_csv(std::ostream& os, const ExperimentConfig& cfg,
                          const RobustnessResult& result);

// ---- pd-sim: threshold calibration and detection curves ----

struct PdRow {
  double scr_db = 0.0;
  std::string detector;
  double threshold = 0.0;
  double pd = 0.0;
  double se = 0.0;
};

struct PdSimResult {
  std::vector<CalibratedThreshold> thresholds;  // aligned with the detector list
  std::vector<PdRow> rows;                      // ordered by scr, then detector
  // Geometric mean evaluations that hit the iteration cap across all trials.
  // The iterates are still used, so this is a diagnostic, not an error.
  long long nonconverged_means = 0;
};

// Loads projection files for lda detectors and validates shapes against the
// configured pulse count.
std::vector<DetectorSpec> resolve_detectors(const ExperimentConfig& cfg);

PdSimResult run_pd_sim(const ExperimentConfig& cfg, const std::vector<DetectorSpec>& dets);
void write_pd_csv(std::ostream& os, const ExperimentConfig& cfg,
                  const std::vector<DetectorSpec>& dets, const PdSimResult& result);

// Fresh null trials scored against fixed thresholds; used to verify the
// calibrated false-alarm rate out of sample.
std::vector<PdEstimate> run_pfa_check(const ExperimentConfig& cfg,
                                      const std::vector<DetectorSpec>& dets,
                                      const std::vector<double>& gammas, long long trials);

// ---- learn: synthetic training set and projection fitting ----

// Labeled training data for one measure: target-bearing CUT matrices against
// geometric means of target-free secondary sets.
LabeledHpdSet make_training_set(const ExperimentConfig& cfg, Measure m, uint64_t seed);

struct LearnOutput {
  Projection projection;
  int target_dim = 0;
  std::string filename;  // proj_<measure>_m<dim>.migw1
};

// Trains one projection per (measure, target_dim) pair from the config. When
// out_dir is non-empty the projections are also written there.
std::vector<LearnOutput> run_learn(const ExperimentConfig& cfg, const std::string& out_dir);

// ---- discriminate: projected scatter for visual class separation ----

struct ScatterRow {
  double pc1 = 0.0;
  double pc2 = 0.0;
  int label = 0;  // 1 target-bearing, 0 clutter-only
  double scr_db = 0.0;
};

struct DiscriminateResult {
  std::vector<ScatterRow> rows;
};

// Projects labeled samples through proj, maps them to log coordinates, and
// returns the top-2 principal component scores over the pooled set.
DiscriminateResult run_discriminate(const ExperimentConfig& cfg, const Projection& proj);
void write_scatter_csv(std::ostream& os, const ExperimentConfig& cfg, const Projection& proj,
                       const DiscriminateResult& result);

}  // namespace mig
