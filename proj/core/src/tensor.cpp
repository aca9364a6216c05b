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
#include "rstar/tensor.hpp"

#include <stdexcept>

namespace rstar::ad {

TensorPtr make_tensor(std::vector<int> shape) {
  auto t = std::make_shared<Tensor>();
  t->shape = std::move(shape);
  for (int d : t->shape) {
    if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive, got " +
                                            shape_str(t->shape));
  }
  t->values.assign(static_cast<std::size_t>(t->numel()), 0.0);
  return t;
}

TensorPtr make_tensor(std::vector<int> shape, std::vector<double> values) {
  auto t = make_tensor(std::move(shape));
  if (values.size() != t->values.size()) {
    throw std::invalid_argument("tensor data size " + std::to_string(values.size()) +
                                " does not match shape " + shape_str(t->shape));
  }
  t->values = std::move(values);
  return t;
}

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace rstar::ad
