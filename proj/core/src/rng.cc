// Copyright 2026 The ldpchisq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldpchisq/rng.h"

#include <random>
#include <stdexcept>

namespace ldpchisq {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t& x) {
  x += kGolden;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Combines a parent key with a stream index. Two splitmix rounds so that
// consecutive indices land far apart in key space.
std::uint64_t mix_key(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t s = parent ^ (index + kGolden + (parent << 6) + (parent >> 2));
  (void)splitmix64(s);
  return splitmix64(s);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : RngStream(mix_key(master_seed, stream_index), KeyTag{}) {}

RngStream::RngStream(std::uint64_t key, KeyTag) : key_(key) {
  std::uint64_t s = key;
  for (auto& word : state_) word = splitmix64(s);
  // xoshiro256** must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(mix_key(key_, index), KeyTag{});
}

RngStream::result_type RngStream::operator()() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() { return ((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: bound must be positive");
  // Rejection from the top to avoid modulo bias.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t v = (*this)();
  while (v >= limit) v = (*this)();
  return v % bound;
}

double RngStream::normal(double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(*this);
}

double RngStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0) {
    throw std::invalid_argument("gamma: shape and scale must be positive");
  }
  std::gamma_distribution<double> dist(shape, scale);
  return dist(*this);
}

std::int64_t RngStream::binomial(std::int64_t trials, double prob) {
  if (trials < 0) throw std::invalid_argument("binomial: trials must be >= 0");
  if (trials == 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, prob);
  return dist(*this);
}

}  // namespace ldpchisq
