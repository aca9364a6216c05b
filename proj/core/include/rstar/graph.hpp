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
#ifndef RSTAR_GRAPH_HPP_
#define RSTAR_GRAPH_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rstar/tensor.hpp"

namespace rstar::ad {

/// Tape of one forward pass. Operators append their outputs and a backward
/// closure in execution order; backward() replays the closures in exact
/// reverse order, which is a reverse topological order by construction.
///
/// A Graph and the tensors it creates belong to a single logical worker.
/// Distinct graphs may run concurrently over shared read-only parameters.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  /// Output tensor tracked by this graph. Its gradient buffer is reset at
  /// the start of every backward pass; leaf (untracked) tensors accumulate
  /// across passes instead.
  TensorPtr make(std::vector<int> shape);

  void record(std::string_view op, std::function<void()> backward_fn);

  /// Mixes a discrete decision (an argmax index, a relu sign) into a running
  /// hash. Two forward passes that made identical decisions everywhere have
  /// equal hashes; finite-difference checks use this to reject points where
  /// a perturbation flipped some max.
  void note_choice(std::uint64_t v) {
    choice_hash_ = (choice_hash_ ^ v) * 0x100000001b3ULL;
  }
  std::uint64_t choice_hash() const { return choice_hash_; }

  /// Seeds d(loss)/d(loss) = 1 and runs the recorded closures in reverse.
  /// `loss` must be a scalar created by this graph. Throws rstar::Error if
  /// no forward pass was recorded.
  void backward(const TensorPtr& loss);

  std::size_t num_ops() const { return nodes_.size(); }
  int op_count(std::string_view op) const;
  bool owns(const Tensor* t) const { return owned_.count(t) != 0; }

 private:
  struct Node {
    std::function<void()> backward;
  };
  std::vector<Node> nodes_;
  std::vector<TensorPtr> intermediates_;
  std::unordered_set<const Tensor*> owned_;
  std::map<std::string, int, std::less<>> op_counts_;
  std::uint64_t choice_hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace rstar::ad

#endif  // RSTAR_GRAPH_HPP_
