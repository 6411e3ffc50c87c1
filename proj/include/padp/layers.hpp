// Copyright 2026 The padp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Layered data partitioning shared by the non-contextual and contextual
// pricing policies.
//
// Past rounds are split into disjoint layers Psi^1..Psi^S (initialization
// rounds belong to every layer). For each round the policy walks the
// layers from s = 1, fits one local model per (layer, interval), and
// either exploits (step a), eliminates intervals and descends (step b),
// or explores the widest interval at the current layer (else-branch).

#ifndef PADP_LAYERS_HPP_
#define PADP_LAYERS_HPP_

#include "padp/features.hpp"
#include "padp/record.hpp"

#include <optional>
#include <vector>

namespace padp {

struct LayeredConfig {
  PriceGrid grid;
  int degree = 1;
  long horizon = 1;
  double delta = 0.05;
  int n_layers = 1;
  double gamma = 1.0;
  int context_dim = 0;
  int sup_resolution = 64;
  bool refine = true;
  /// Step (a) argmax over every interval instead of the active set.
  bool exploit_over_all = false;
  Basis basis = Basis::kLegendre;
};

struct StepDecision {
  double price = 0.0;
  Branch branch = Branch::kExplore;
  int stopping_layer = 1;
  int interval = 1;
  /// active_sets[s - 1] = A_{t,s} for s = 1..stopping_layer.
  std::vector<std::vector<int>> active_sets;
  /// phi(price)' theta and sqrt(phi' Lambda^{-1} phi) of the chosen
  /// interval's model at the stopping layer.
  double predicted_mean = 0.0;
  double width = 0.0;
};

struct Observation {
  double price = 0.0;
  Vector context;
  double demand = 0.0;
  /// -1 for initialization rounds, 0 for step (a), s for else-branch rounds.
  int assignment = -1;
};

class LayeredPricer {
 public:
  explicit LayeredPricer(LayeredConfig config);

  const LayeredConfig& config() const { return config_; }
  /// Number of observed rounds; the next round is rounds() + 1.
  long rounds() const { return static_cast<long>(history_.size()); }

  /// Records an initialization round: the sample joins every layer.
  void observe_init(double price, const Vector& context, double demand);

  /// Runs the layer walk for the next round at context x (ignored when
  /// context_dim is zero). Mutates only model caches.
  StepDecision decide(const Vector* context = nullptr);

  /// Records the outcome of a decision returned by decide().
  void observe(const StepDecision& decision, const Vector& context,
               double demand);

  const std::vector<Observation>& history() const { return history_; }
  /// Round indices (1-based) in Psi^s, increasing.
  const std::vector<long>& psi(int s) const { return psi_[s - 1]; }
  /// A_{t,1}: intervals holding at least one past price.
  std::vector<int> visited() const;

  /// Fitted model for (layer s, interval j). Throws SingularModelError.
  const LocalModel& model(int s, int j);
  /// Unfitted accumulator for (layer s, interval j).
  const LocalModel& raw_model(int s, int j) const {
    return models_[index(s, j)].model;
  }
  /// Rebuilds D^j_{t,s} from the history, for consistency checks.
  std::vector<Sample> dataset(int s, int j) const;

 private:
  struct Cell {
    LocalModel model;
    bool fitted = false;
    std::optional<IntervalSups> sups;  // non-contextual cache
  };

  std::size_t index(int s, int j) const {
    return static_cast<std::size_t>(s - 1) * config_.grid.size() +
           static_cast<std::size_t>(j - 1);
  }
  void add_to_layer(int s, double price, const Vector& context, double demand);
  const IntervalSups& sups(int s, int j, const Vector* context,
                           IntervalSups& scratch);

  LayeredConfig config_;
  std::vector<Cell> models_;
  std::vector<std::vector<long>> psi_;
  std::vector<Observation> history_;
  std::vector<char> visited_;
};

}  // namespace padp

#endif  // PADP_LAYERS_HPP_
