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

#ifndef LDPCHISQ_RNG_H_
#define LDPCHISQ_RNG_H_

#include <array>
#include <cstdint>

namespace ldpchisq {

// Reproducible random stream keyed by a (master seed, stream index) pair.
//
// Distinct key pairs yield statistically independent streams; identical pairs
// yield identical draw sequences within one build of the library. Streams are
// value types: copy one to replay it, or call substream() to derive a child
// keyed by (this stream, index). The generator is xoshiro256** seeded through
// splitmix64, so derived streams decorrelate even for adjacent indices.
//
// Satisfies UniformRandomBitGenerator, so standard distributions apply.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // Child stream fully determined by (this stream's key, index). Does not
  // disturb this stream's state.
  RngStream substream(std::uint64_t index) const;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double normal(double mean = 0.0, double stddev = 1.0);
  double gamma(double shape, double scale);
  std::int64_t binomial(std::int64_t trials, double prob);

 private:
  struct KeyTag {};
  RngStream(std::uint64_t key, KeyTag);

  std::uint64_t key_ = 0;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace ldpchisq

#endif  // LDPCHISQ_RNG_H_
