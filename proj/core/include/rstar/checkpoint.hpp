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
#ifndef RSTAR_CHECKPOINT_HPP_
#define RSTAR_CHECKPOINT_HPP_

#include <string>

#include "rstar/model.hpp"
#include "rstar/train.hpp"

namespace rstar {

/// Zero-filled parameter tensors with the shapes the config implies.
ModelParams allocate_params(const ModelConfig& cfg);

struct Checkpoint {
  ModelConfig model;
  TrainConfig train;
  ModelParams params;
};

/// RSTARCKPT container: magic, version, JSON header (tensor names, shapes,
/// offsets, checksums, embedded configs), then raw little-endian doubles.
/// Round-trips are bit-exact. Writes go through a temp file plus rename.
void save_checkpoint(const std::string& path, const ModelParams& params,
                     const ModelConfig& mcfg, const TrainConfig& tcfg);

/// Validates magic/version/checksums and that every tensor matches the shape
/// implied by the embedded model config.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace rstar

#endif  // RSTAR_CHECKPOINT_HPP_
