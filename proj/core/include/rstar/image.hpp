/* Copyright 2026 The RStar Authors.

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
#ifndef RSTAR_IMAGE_HPP_
#define RSTAR_IMAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rstar/tensor.hpp"

namespace rstar {

/// Raw 8-bit interleaved RGB image (row-major, c fastest).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

Image make_image(int width, int height, int channels = 3);

/// Planar [C,H,W] tensor of floats in [0,1]. The tensor is a leaf that does
/// not require gradients.
ad::TensorPtr image_to_tensor(const Image& img);

}  // namespace rstar

#endif  // RSTAR_IMAGE_HPP_
