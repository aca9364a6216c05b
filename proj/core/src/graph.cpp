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
#include "rstar/graph.hpp"

#include "rstar/error.hpp"

namespace rstar::ad {

TensorPtr Graph::make(std::vector<int> shape) {
  TensorPtr t = make_tensor(std::move(shape));
  intermediates_.push_back(t);
  owned_.insert(t.get());
  return t;
}

void Graph::record(std::string_view op, std::function<void()> backward_fn) {
  nodes_.push_back(Node{std::move(backward_fn)});
  ++op_counts_[std::string(op)];
}

int Graph::op_count(std::string_view op) const {
  auto it = op_counts_.find(op);
  return it == op_counts_.end() ? 0 : it->second;
}

void Graph::backward(const TensorPtr& loss) {
  if (nodes_.empty()) {
    throw Error("backward called before any forward pass was recorded");
  }
  if (!loss || loss->numel() != 1) {
    throw Error("backward expects a scalar loss tensor");
  }
  if (!owns(loss.get())) {
    throw Error("backward: loss tensor was not produced by this graph");
  }
  // Intermediates get a fresh gradient per pass; leaves keep accumulating.
  for (const TensorPtr& t : intermediates_) t->zero_grad();
  loss->grad[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    it->backward();
  }
}

}  // namespace rstar::ad
