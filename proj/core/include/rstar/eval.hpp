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
#ifndef RSTAR_EVAL_HPP_
#define RSTAR_EVAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rstar/dataset.hpp"
#include "rstar/model.hpp"
#include "rstar/proposals.hpp"

namespace rstar {

/// Uninterpolated average precision: mean over positives of the precision at
/// each positive's rank, scores sorted descending with ties broken by the
/// original index. The 11-point interpolated variant is selectable.
/// Throws rstar::Error when there is no positive label.
double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels, bool interpolated = false);

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Precision/recall at every rank of the descending-score ordering.
std::vector<PRPoint> pr_curve(const std::vector<double>& scores,
                              const std::vector<int>& labels);

/// Per-frame score vectors: elementwise max over each frame's instances.
std::map<int, std::vector<double>> frame_level(
    const std::vector<std::pair<int, std::vector<double>>>& instance_scores);

struct EvalOptions {
  bool frame_level = false;
  bool interpolated_ap = false;
  std::uint64_t seed = 0;  // draw stream for mode random
  int threads = 0;         // 0: RSTAR_THREADS env var, else all cores
};

struct InstanceRecord {
  int image_index = 0;
  int instance_index = 0;
  std::string image_id;
  int frame_id = 0;
  int label = 0;
  std::vector<double> attributes;
  std::vector<double> probabilities;
  std::vector<std::vector<Region>> selected;  // per action
  int predicted = 0;                          // argmax class
};

struct EvalReport {
  std::vector<std::string> class_names;
  bool frame_level = false;
  bool interpolated = false;
  std::vector<double> ap;        // aligned with class_names; NaN when omitted
  std::vector<bool> ap_defined;  // class had at least one positive
  double map = 0.0;
  std::vector<std::vector<PRPoint>> curves;  // per class
  std::vector<InstanceRecord> instances;
  std::vector<std::string> warnings;

  std::string to_text() const;                   // key: value lines
  void write_pr_csv(std::ostream& out) const;    // class,threshold,precision,recall
  void write_selections(std::ostream& out) const;
};

/// Runs predict on every instance at its ground-truth primary region and
/// scores every class by average precision (per instance, or per frame when
/// requested). Deterministic apart from mode random, which follows the
/// option seed. Parallel across images with a deterministic merge.
EvalReport evaluate(const Dataset& dataset, const std::vector<ProposalSet>& proposals,
                    const ModelParams& params, const ModelConfig& cfg,
                    const EvalOptions& opts = {});

/// How often the secondary region selected for the predicted action overlaps
/// the planted cue, among correctly classified instances that have a cue.
struct CueOverlapStats {
  int considered = 0;
  int hits = 0;
  double mean_iou = 0.0;
  double fraction() const { return considered ? static_cast<double>(hits) / considered : 0.0; }
};
CueOverlapStats cue_overlap(const EvalReport& report, const Dataset& dataset,
                            double iou_threshold = 0.3);

/// Worker count for read-only parallel sections: `requested` when > 0, else
/// the RSTAR_THREADS environment variable, else all cores.
int eval_thread_count(int requested);

}  // namespace rstar

#endif  // RSTAR_EVAL_HPP_
