#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mig/detect.hpp"
#include "mig/signal.hpp"

namespace mig {

// Detector request as written in config files; projections are loaded later
// by the experiment layer.
struct DetectorRequest {
  DetectorKind kind = DetectorKind::Mig;
  Measure measure = Measure::Airm;
  std::string projection_path;  // lda only

  std::string to_string() const;
};

DetectorRequest parse_detector(const std::string& text);

struct TrainingConfig {
  int per_class = 150;          // matrices per labeled class
  double scr_db = 25.0;         // target strength used for the signal class
  int nu_within = 15;
  int nu_between = 20;
  int secondary_k = 0;          // 0: use the top-level k_secondary
  std::vector<int> target_dims = {4};
  std::vector<Measure> measures = {Measure::Airm, Measure::Lem, Measure::Jbld, Measure::Skld};
  int max_iter = 120;
  double grad_tol = 1e-6;
  uint64_t seed = 0;  // 0: derive from the master seed
};

struct RobustnessConfig {
  int k = 50;
  std::vector<int> l_values = {5, 20, 40};
  int trials = 200;
};

struct DiscriminateConfig {
  std::string projection_path;
  std::vector<double> scr_grid_db = {5.0, 10.0};
  int per_class = 200;
};

struct ExperimentConfig {
  uint64_t master_seed = 20260825;
  int threads = 1;

  ClutterModel clutter;
  InterferenceModel interference;
  CutModel cut;            // q_power <= 0 resolves to sigma_c^2 / 10
  TargetModel target;

  int k_secondary = 8;
  double pfa = 1e-3;
  int trials = 500;
  long long cal_trials = 0;  // 0: ceil(100 / pfa)
  std::vector<double> scr_grid_db = {10.0, 14.0, 18.0, 22.0, 26.0};
  std::vector<DetectorRequest> detectors;

  TrainingConfig training;
  RobustnessConfig robustness;
  DiscriminateConfig discriminate;

  double resolved_q_power() const;
  long long resolved_cal_trials() const;
  int resolved_training_k() const { return training.secondary_k > 0 ? training.secondary_k : k_secondary; }
  void validate() const;
};

// Named baselines. "desk" keeps runtimes interactive; "paper" matches the
// published operating point (pfa 1e-5, 2000 trials, 1000 training matrices
// per class).
ExperimentConfig preset(const std::string& name);

// Overlays a config file onto a base configuration; keys absent from the
// file keep their base values. Unknown keys are errors.
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base);
ExperimentConfig parse_config_text(const std::string& text, const ExperimentConfig& base);

}  // namespace mig
