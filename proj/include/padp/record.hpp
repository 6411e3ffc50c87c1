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

#ifndef PADP_RECORD_HPP_
#define PADP_RECORD_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace padp {

enum class Branch {
  kInit,      // initialization round
  kExploit,   // step (a)
  kExplore,   // else-branch: width-maximizing price at the stopping layer
  kEstimate,  // uniform exploration round of the smoothness estimator
  kBinned,    // baseline bin-UCB round
};

const char* branch_name(Branch b);

/// One priced round. `layer` is the stopping layer s_t for layered
/// policies and 0 otherwise.
struct RoundRecord {
  long t = 0;
  Branch branch = Branch::kInit;
  int layer = 0;
  int interval = 0;
  double price = 0.0;
  double demand = 0.0;
  double regret = 0.0;
  // Context digest: norm and up to four leading components.
  double context_norm = 0.0;
  int context_len = 0;
  std::array<double, 4> context_head{};
};

struct RunRecord {
  std::vector<RoundRecord> rounds;

  long horizon() const { return static_cast<long>(rounds.size()); }
  double cumulative_regret() const;
  /// FNV-1a over the raw bytes of every per-round field.
  std::uint64_t digest() const;
  void append(const RunRecord& other);
};

}  // namespace padp

#endif  // PADP_RECORD_HPP_
