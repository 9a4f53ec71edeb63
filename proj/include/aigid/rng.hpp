/* Copyright 2026 The aigid Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef AIGID_RNG_HPP_
#define AIGID_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aigid {

// Mixes a root seed with a list of integers into an independent child seed
// (splitmix64 finaliser applied per component).
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Seeded random stream with a platform-independent draw sequence.
//
// The standard distributions are implementation-defined, so all transforms
// from raw engine output are done here: uniform reals take the top 53 bits,
// normals use Box-Muller.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi);
  bool bernoulli(double p) { return uniform() < p; }
  double normal(double mean = 0.0, double stddev = 1.0);

  // Independent child stream; does not advance this stream.
  RngStream fork(std::uint64_t tag) const { return RngStream(derive_seed(seed_, {tag})); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aigid

#endif  // AIGID_RNG_HPP_
