#pragma once

#include <string>
#include <vector>

#include "mig/measures.hpp"
#include "mig/stiefel.hpp"

namespace mig {

// Two labeled families of HPD matrices: target-bearing (signal) and
// target-free (clutter).
struct LabeledHpdSet {
  std::vector<HpdMatrix> signal_class;
  std::vector<HpdMatrix> clutter_class;

  Index size() const { return Index(signal_class.size() + clutter_class.size()); }
  Index dim() const;
  // Flattened view: signal matrices first, then clutter.
  const HpdMatrix& at(Index i) const;
  bool is_signal(Index i) const { return i < Index(signal_class.size()); }
};

struct NeighborSpec {
  int nu_within = 15;
  int nu_between = 20;
  Measure measure = Measure::Airm;
};

// Per anchor (flattened index), the nearest same-class and other-class
// matrices under the chosen measure in the ambient space. Requested counts
// are clamped to what exists; ties break toward the smaller index.
struct NeighborLists {
  std::vector<std::vector<Index>> within;
  std::vector<std::vector<Index>> between;
};

NeighborLists select_neighbors(const LabeledHpdSet& data, const NeighborSpec& spec);

// Graph-weighted discrimination objective: sum of projected squared distances
// over within-class neighbor pairs minus the sum over between-class pairs.
// Smaller is better.
double cost_psi(const StiefelPoint& w, const LabeledHpdSet& data, const NeighborLists& nb,
                Measure m);

// Euclidean gradient in W of d^2(W^H X W, W^H Y W) for each measure.
ComplexMatrix grad_sq_distance(Measure m, const StiefelPoint& w, const HpdMatrix& x,
                               const HpdMatrix& y);

// Euclidean gradient of cost_psi at W.
ComplexMatrix psi_euclidean_gradient(const StiefelPoint& w, const LabeledHpdSet& data,
                                     const NeighborLists& nb, Measure m);

struct TrainMeta {
  uint64_t seed = 0;
  int iterations = 0;
  double final_cost = 0.0;
  double grad_norm = 0.0;
  bool stalled = false;
};

struct Projection {
  StiefelPoint w;
  Measure measure = Measure::Airm;
  TrainMeta meta;
};

// Learns W on the Stiefel manifold by Riemannian descent of cost_psi.
// Neighbor lists are fixed up front in the ambient manifold and never
// recomputed during optimization.
Projection learn_projection(const LabeledHpdSet& data, const NeighborSpec& spec,
                            Index target_dim, const RgdOptions& opts);

// Binary projection file: magic "MIGW1", u32 N, u32 M, u8 measure tag
// (0 airm, 1 lem, 2 jbld, 3 skld), N*M little-endian f64 (re, im) pairs in
// column-major order, u64 training seed.
void save_projection(const Projection& p, const std::string& path);
Projection load_projection(const std::string& path);

}  // namespace mig
