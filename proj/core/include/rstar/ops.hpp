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
#ifndef RSTAR_OPS_HPP_
#define RSTAR_OPS_HPP_

#include <cstdint>
#include <vector>

#include "rstar/graph.hpp"
#include "rstar/region.hpp"
#include "rstar/tensor.hpp"

namespace rstar::ad {

/// Valid cross-correlation. input [C_in,H,W], weight [C_out,C_in,k,k],
/// bias [C_out] -> [C_out,H',W'] with H' = (H + 2*padding - k)/stride + 1.
TensorPtr conv2d(Graph& g, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias, int stride = 1, int padding = 0);

/// Elementwise max(0, x). Gradient is 0 at and below zero.
TensorPtr relu(Graph& g, const TensorPtr& input);

/// Windowed max over each channel. Gradient routes to the first (row-major)
/// argmax element of each window.
TensorPtr max_pool2d(Graph& g, const TensorPtr& input, int window, int stride);

/// Affine map w*x + b. x [d], w [d_out,d], b [d_out] -> [d_out].
TensorPtr linear(Graph& g, const TensorPtr& x, const TensorPtr& w,
                 const TensorPtr& b);

/// Adaptive max pooling of a region of interest into a fixed out_size x
/// out_size grid per channel. The roi is scaled into feature coordinates
/// (floor on start, ceil on end), split into out_size^2 bins by an even
/// real-valued partition, each bin rounded outward so it covers at least one
/// cell. Gradients route to each bin's argmax cell and accumulate when bins
/// or overlapping rois share cells.
TensorPtr roi_max_pool(Graph& g, const TensorPtr& features, const Region& roi,
                       double spatial_scale, int out_size);

/// [numel] copy of the input; gradient flows through one-to-one.
TensorPtr flatten(Graph& g, const TensorPtr& input);

TensorPtr add(Graph& g, const TensorPtr& a, const TensorPtr& b);
TensorPtr scale(Graph& g, const TensorPtr& a, double factor);

/// Stacks K tensors of shape [A] into [K,A].
TensorPtr stack_rows(Graph& g, const std::vector<TensorPtr>& rows);

/// Per-column max over the rows of a [K,A] matrix: the latent selection.
/// Ties resolve to the lowest row index; the gradient is nonzero in exactly
/// one row per column.
struct RowMax {
  TensorPtr values;         // [A]
  std::vector<int> argmax;  // row index per column
};
RowMax reduce_max_rows(Graph& g, const TensorPtr& scores);

/// Same, but column a only considers rows k with eligible[k*A + a] != 0.
/// Every column must have at least one eligible row.
RowMax reduce_max_rows(Graph& g, const TensorPtr& scores,
                       const std::vector<std::uint8_t>& eligible);

/// -log softmax(scores)[label], computed with max subtraction. The softmax
/// probabilities of the forward pass are exposed alongside the loss.
struct LossResult {
  TensorPtr loss;                    // scalar
  std::vector<double> probabilities; // full distribution (or per-attribute)
};
LossResult softmax_logloss(Graph& g, const TensorPtr& scores, int label);

/// Mean over attributes of the stabilized binary cross entropy
/// -[y log s(x) + (1-y) log(1-s(x))]. Labels must be exactly 0 or 1.
LossResult sigmoid_cross_entropy(Graph& g, const TensorPtr& scores,
                                 const std::vector<double>& labels);

/// Sum of scalar tensors (used to combine per-example losses).
TensorPtr sum_scalars(Graph& g, const std::vector<TensorPtr>& scalars);

/// Softmax of a raw score vector, outside any graph (inference only).
std::vector<double> softmax_values(const std::vector<double>& scores);

/// Elementwise logistic, outside any graph (inference only).
std::vector<double> sigmoid_values(const std::vector<double>& scores);

}  // namespace rstar::ad

#endif  // RSTAR_OPS_HPP_
