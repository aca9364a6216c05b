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
#ifndef RSTAR_TENSOR_HPP_
#define RSTAR_TENSOR_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rstar::ad {

/// Dense row-major 64-bit float array with an optional gradient accumulator
/// of the same shape. Gradients are accumulated (+=) by backward passes and
/// survive until explicitly zeroed, so repeated backward calls add up.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until first needed

  // Gradient propagation stops here when false (e.g. input images).
  bool requires_grad = true;

  std::int64_t numel() const {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    return n;
  }

  bool has_grad() const { return !grad.empty(); }

  void ensure_grad() {
    if (grad.empty()) grad.assign(values.size(), 0.0);
  }

  void zero_grad() { grad.assign(values.size(), 0.0); }
};

using TensorPtr = std::shared_ptr<Tensor>;

/// Leaf tensor of zeros (not tracked by any graph).
TensorPtr make_tensor(std::vector<int> shape);

/// Leaf tensor with given contents; throws if sizes disagree.
TensorPtr make_tensor(std::vector<int> shape, std::vector<double> values);

std::string shape_str(const std::vector<int>& shape);

}  // namespace rstar::ad

#endif  // RSTAR_TENSOR_HPP_
