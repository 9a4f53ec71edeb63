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

#ifndef AIGID_TESTS_SUPPORT_HPP_
#define AIGID_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <string>

#include "aigid/raster.hpp"
#include "aigid/rng.hpp"

namespace aigid::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Uniform [0,1] pixels.
Raster random_raster(int h, int w, RngStream& rng);

double max_abs_diff(const Raster& a, const Raster& b);
double mse(const Raster& a, const Raster& b);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace aigid::testing

#endif  // AIGID_TESTS_SUPPORT_HPP_
