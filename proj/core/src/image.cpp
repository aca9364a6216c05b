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
#include "rstar/image.hpp"

#include <stdexcept>

namespace rstar {

Image make_image(int width, int height, int channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw std::invalid_argument("make_image: extent must be positive");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(static_cast<std::size_t>(width) * height * channels, 0);
  return img;
}

ad::TensorPtr image_to_tensor(const Image& img) {
  ad::TensorPtr t = ad::make_tensor({img.channels, img.height, img.width});
  t->requires_grad = false;
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        t->values[(static_cast<std::size_t>(c) * img.height + y) * img.width + x] =
            img.at(x, y, c) / 255.0;
      }
    }
  }
  return t;
}

}  // namespace rstar
