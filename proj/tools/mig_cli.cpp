#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "mig/experiment.hpp"
#include "mig/iq.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string preset = "desk";
  std::string out;
  uint64_t seed = 0;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

void add_common(CLI::App* sub, CommonArgs& args, const char* out_help) {
  sub->add_option("--config", args.config, "TOML config file overlaid on the preset");
  sub->add_option("--preset", args.preset, "Baseline parameter set")
      ->check(CLI::IsMember({"desk", "paper"}));
  args.seed_opt = sub->add_option("--seed", args.seed, "Master seed override");
  args.threads_opt = sub->add_option("--threads", args.threads, "Worker thread count");
  sub->add_option("--out", args.out, out_help);
}

mig::ExperimentConfig build_config(const CommonArgs& args) {
  mig::ExperimentConfig cfg = mig::preset(args.preset);
  if (!args.config.empty()) cfg = mig::load_config(args.config, cfg);
  if (args.seed_opt && args.seed_opt->count()) cfg.master_seed = args.seed;
  if (args.threads_opt && args.threads_opt->count()) cfg.threads = args.threads;
  cfg.validate();
  return cfg;
}

// Writes to --out when given, stdout otherwise.
int emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 1;
  }
  os << text;
  return os ? 0 : 1;
}

int cmd_robustness(const CommonArgs& args) {
  mig::ExperimentConfig cfg = build_config(args);
  mig::RobustnessResult res = mig::run_robustness(cfg);
  std::ostringstream csv;
  mig::write_robustness_csv(csv, cfg, res);
  return emit(args.out, csv.str());
}

int cmd_pd_sim(const CommonArgs& args) {
  mig::ExperimentConfig cfg = build_config(args);
  std::vector<mig::DetectorSpec> dets = mig::resolve_detectors(cfg);
  mig::PdSimResult res = mig::run_pd_sim(cfg, dets);
  for (size_t d = 0; d < dets.size(); ++d) {
    if (res.thresholds[d].under_recommended)
      std::cerr << "warning: " << dets[d].name() << " calibrated from only "
                << res.thresholds[d].trials_used << " null trials; 100/pfa recommended\n";
  }
  if (res.nonconverged_means > 0)
    std::cerr << "warning: " << res.nonconverged_means
              << " geometric mean evaluations stopped at the iteration cap\n";
  std::ostringstream csv;
  mig::write_pd_csv(csv, cfg, dets, res);
  return emit(args.out, csv.str());
}

int cmd_learn(const CommonArgs& args) {
  mig::ExperimentConfig cfg = build_config(args);
  const std::string dir = args.out.empty() ? std::string(".") : args.out;
  std::vector<mig::LearnOutput> outs = mig::run_learn(cfg, dir);
  bool any_stalled = false;
  for (const auto& o : outs) {
    std::cout << dir << "/" << o.filename << " measure=" << mig::measure_name(o.projection.measure)
              << " dim=" << o.target_dim << " iterations=" << o.projection.meta.iterations
              << " cost=" << o.projection.meta.final_cost
              << " grad_norm=" << o.projection.meta.grad_norm
              << (o.projection.meta.stalled ? " stalled" : "") << "\n";
    any_stalled = any_stalled || o.projection.meta.stalled;
  }
  if (any_stalled) {
    std::cerr << "error: optimizer stalled before reaching its tolerance\n";
    return 1;
  }
  return 0;
}

int cmd_discriminate(const CommonArgs& args) {
  mig::ExperimentConfig cfg = build_config(args);
  if (cfg.discriminate.projection_path.empty()) {
    std::cerr << "error: discriminate needs [discriminate] projection = \"file.migw1\"\n";
    return 1;
  }
  mig::Projection proj = mig::load_projection(cfg.discriminate.projection_path);
  mig::DiscriminateResult res = mig::run_discriminate(cfg, proj);
  std::ostringstream csv;
  mig::write_scatter_csv(csv, cfg, proj, res);
  return emit(args.out, csv.str());
}

int cmd_ingest(const std::string& input, const std::string& out) {
  mig::IqCube cube = mig::load_iq(input);
  double power = 0.0;
  for (const auto& s : cube.samples) power += double(std::norm(s));
  power /= double(cube.samples.size());
  std::cout << "pulses=" << cube.pulses << " cells=" << cube.cells << " mean_power=" << power
            << "\n";
  if (!out.empty()) mig::write_migiq1(cube, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix information geometry detection experiments"};
  app.require_subcommand(1);

  CommonArgs rob, pd, learn, disc;
  CLI::App* sub_rob = app.add_subcommand("robustness", "Influence of interference outliers");
  add_common(sub_rob, rob, "CSV output path (default stdout)");
  CLI::App* sub_pd = app.add_subcommand("pd-sim", "Detection probability curves");
  add_common(sub_pd, pd, "CSV output path (default stdout)");
  CLI::App* sub_learn = app.add_subcommand("learn", "Train discriminative projections");
  add_common(sub_learn, learn, "Output directory for .migw1 files (default .)");
  CLI::App* sub_disc = app.add_subcommand("discriminate", "Projected class scatter");
  add_common(sub_disc, disc, "CSV output path (default stdout)");

  std::string ingest_in, ingest_out;
  CLI::App* sub_ingest = app.add_subcommand("ingest", "Inspect or convert IQ sample cubes");
  sub_ingest->add_option("input", ingest_in, "MIGIQ1 or CSV file")->required();
  sub_ingest->add_option("--out", ingest_out, "Write the cube back as MIGIQ1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sub_rob->parsed()) return cmd_robustness(rob);
    if (sub_pd->parsed()) return cmd_pd_sim(pd);
    if (sub_learn->parsed()) return cmd_learn(learn);
    if (sub_disc->parsed()) return cmd_discriminate(disc);
    if (sub_ingest->parsed()) return cmd_ingest(ingest_in, ingest_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
