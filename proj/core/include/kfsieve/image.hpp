/*
 * kfsieve — content-aware keyframe selection for posed RGB-D streams
 *
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kfsieve/errors.hpp"

namespace kfsieve {

/// Immutable 2D pixel grid with `Channels` interleaved samples per pixel.
/// Copies are cheap: the pixel buffer is shared, never mutated. Row-major,
/// sample index = (y * width + x) * Channels + c.
template <typename T, int Channels>
class Grid {
  static_assert(Channels >= 1);

 public:
  Grid() = default;

  Grid(int width, int height)
      : Grid(width, height,
             std::vector<T>(static_cast<std::size_t>(width) * height * Channels, T{})) {}

  Grid(int width, int height, std::vector<T> samples)
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw ValidationError("grid dimensions must be positive");
    }
    if (samples.size() != static_cast<std::size_t>(width) * height * Channels) {
      throw ValidationError("grid sample count does not match dimensions");
    }
    data_ = std::make_shared<const std::vector<T>>(std::move(samples));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_ == nullptr; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  T at(int x, int y, int c = 0) const {
    return (*data_)[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }

  std::span<const T> samples() const {
    return data_ ? std::span<const T>(data_->data(), data_->size()) : std::span<const T>();
  }

  /// Underlying shared buffer; exposed so callers can reason about sharing.
  std::shared_ptr<const std::vector<T>> buffer() const { return data_; }

  bool same_dims(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::shared_ptr<const std::vector<T>> data_;
};

using ImageRgb = Grid<float, 3>;   // intensities normalized to [0,1]
using DepthMap = Grid<float, 1>;   // meters; 0 or non-finite marks invalid
using Mask = Grid<std::uint8_t, 1>;

}  // namespace kfsieve
