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

#include "padp/record.hpp"

#include <cstring>

namespace padp {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::kInit:
      return "init";
    case Branch::kExploit:
      return "exploit_a";
    case Branch::kExplore:
      return "explore_else";
    case Branch::kEstimate:
      return "estimate";
    case Branch::kBinned:
      return "binned";
  }
  return "unknown";
}

double RunRecord::cumulative_regret() const {
  double sum = 0.0;
  for (const auto& r : rounds) sum += r.regret;
  return sum;
}

namespace {

template <typename T>
void fnv(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
}

}  // namespace

std::uint64_t RunRecord::digest() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& r : rounds) {
    fnv(h, r.t);
    fnv(h, static_cast<int>(r.branch));
    fnv(h, r.layer);
    fnv(h, r.interval);
    fnv(h, r.price);
    fnv(h, r.demand);
    fnv(h, r.regret);
    fnv(h, r.context_norm);
  }
  return h;
}

void RunRecord::append(const RunRecord& other) {
  rounds.insert(rounds.end(), other.rounds.begin(), other.rounds.end());
}

}  // namespace padp
