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

#include "aigid/image_io.hpp"

#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "aigid/error.hpp"

namespace aigid {
namespace {

// libjpeg pads a truncated stream with grey and only warns; a stream that
// starts with SOI must also end with EOI (trailing padding allowed).
bool jpeg_stream_complete(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || bytes[0] != 0xFF || bytes[1] != 0xD8) return true;
  std::size_t end = bytes.size();
  const std::size_t floor = end > 64 ? end - 64 : 2;
  while (end > floor && bytes[end - 1] != 0xD9) --end;
  return end > floor && bytes[end - 2] == 0xFF;
}

Raster from_mat(const cv::Mat& bgr) {
  Raster out(bgr.rows, bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = row[x][2 - c] / 255.0f;
    }
  }
  return out;
}

cv::Mat to_mat(const Raster& raster) {
  cv::Mat bgr(raster.height(), raster.width(), CV_8UC3);
  for (int y = 0; y < raster.height(); ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < raster.width(); ++x) {
      for (int c = 0; c < 3; ++c) row[x][2 - c] = to_u8(raster.at(y, x, c));
    }
  }
  return bgr;
}

std::vector<std::uint8_t> encode(const Raster& raster, const std::string& ext,
                                 const std::vector<int>& params) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(ext, to_mat(raster), buf, params)) {
    throw Error("image encoder failed for format " + ext);
  }
  return buf;
}

}  // namespace

Raster decode_image(std::span<const std::uint8_t> bytes, const std::string& label) {
  if (bytes.empty() || !jpeg_stream_complete(bytes)) throw DecodeError(label);
  const cv::Mat wrapped(1, static_cast<int>(bytes.size()), CV_8UC1,
                        const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat bgr;
  try {
    bgr = cv::imdecode(wrapped, cv::IMREAD_COLOR);
  } catch (const cv::Exception&) {
    throw DecodeError(label);
  }
  if (bgr.empty() || bgr.type() != CV_8UC3) throw DecodeError(label);
  return from_mat(bgr);
}

Raster read_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  return decode_image(bytes, path.string());
}

std::vector<std::uint8_t> encode_png(const Raster& raster) {
  return encode(raster, ".png", {cv::IMWRITE_PNG_COMPRESSION, 6});
}

std::vector<std::uint8_t> encode_jpeg(const Raster& raster, int quality) {
  if (quality < 1 || quality > 100) throw InvalidConfig("jpeg quality outside [1,100]");
  return encode(raster, ".jpg",
                {cv::IMWRITE_JPEG_QUALITY, quality, cv::IMWRITE_JPEG_PROGRESSIVE, 0,
                 cv::IMWRITE_JPEG_OPTIMIZE, 0});
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw WriteError(path.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WriteError(path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) throw MissingFile(path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace aigid
