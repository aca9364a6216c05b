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
#include "rstar/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "rstar/error.hpp"
#include "rstar/rng.hpp"

namespace rstar {

namespace {

std::vector<std::size_t> rank_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];  // stable: ties keep ascending index
  });
  return order;
}

int count_positives(const std::vector<int>& labels) {
  int p = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("labels must be binary");
    p += l;
  }
  return p;
}

}  // namespace

double average_precision(const std::vector<double>& scores,
                         const std::vector<int>& labels, bool interpolated) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("average_precision: " + std::to_string(scores.size()) +
                                " scores vs " + std::to_string(labels.size()) + " labels");
  }
  const int positives = count_positives(labels);
  if (positives == 0) throw Error("AP undefined: no positive labels");

  const std::vector<std::size_t> order = rank_order(scores);
  if (!interpolated) {
    double ap = 0.0;
    int tp = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (labels[order[r]] == 1) {
        ++tp;
        ap += static_cast<double>(tp) / static_cast<double>(r + 1);
      }
    }
    return ap / positives;
  }

  // 11-point: mean over recall thresholds {0, 0.1, ..., 1} of the maximum
  // precision at recall >= threshold.
  std::vector<double> prec(order.size()), rec(order.size());
  int tp = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    tp += labels[order[r]];
    prec[r] = static_cast<double>(tp) / static_cast<double>(r + 1);
    rec[r] = static_cast<double>(tp) / positives;
  }
  double ap = 0.0;
  for (int t = 0; t <= 10; ++t) {
    const double thr = t / 10.0;
    double best = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (rec[r] >= thr) best = std::max(best, prec[r]);
    }
    ap += best;
  }
  return ap / 11.0;
}

std::vector<PRPoint> pr_curve(const std::vector<double>& scores,
                              const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("pr_curve: score/label size mismatch");
  }
  const int positives = count_positives(labels);
  const std::vector<std::size_t> order = rank_order(scores);
  std::vector<PRPoint> out;
  out.reserve(order.size());
  int tp = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    tp += labels[order[r]];
    PRPoint p;
    p.threshold = scores[order[r]];
    p.precision = static_cast<double>(tp) / static_cast<double>(r + 1);
    p.recall = positives ? static_cast<double>(tp) / positives : 0.0;
    out.push_back(p);
  }
  return out;
}

std::map<int, std::vector<double>> frame_level(
    const std::vector<std::pair<int, std::vector<double>>>& instance_scores) {
  std::map<int, std::vector<double>> frames;
  for (const auto& [frame, scores] : instance_scores) {
    auto [it, fresh] = frames.try_emplace(frame, scores);
    if (!fresh) {
      if (it->second.size() != scores.size()) {
        throw std::invalid_argument("frame_level: inconsistent score lengths in frame " +
                                    std::to_string(frame));
      }
      for (std::size_t i = 0; i < scores.size(); ++i) {
        it->second[i] = std::max(it->second[i], scores[i]);
      }
    }
  }
  return frames;
}

int eval_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RSTAR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

EvalReport evaluate(const Dataset& dataset, const std::vector<ProposalSet>& proposals,
                    const ModelParams& params, const ModelConfig& cfg,
                    const EvalOptions& opts) {
  if (proposals.size() != dataset.images.size()) {
    throw std::invalid_argument("evaluate: proposal list does not match dataset images");
  }
  cfg.validate();

  EvalReport report;
  report.class_names = dataset.class_names;
  report.frame_level = opts.frame_level;
  report.interpolated = opts.interpolated_ap;

  // Predictions per image, parallel with a deterministic merge by index.
  std::vector<std::vector<InstancePrediction>> preds(dataset.images.size());
  const int workers =
      std::max(1, std::min<int>(eval_thread_count(opts.threads),
                                static_cast<int>(dataset.images.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dataset.images.size()) return;
      const DatasetImage& di = dataset.images[i];
      std::vector<Region> primaries;
      for (const Instance& inst : di.instances) primaries.push_back(inst.person);
      preds[i] = predict(di.image, primaries, proposals[i], params, cfg,
                         derive_seed(opts.seed, i));
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    const DatasetImage& di = dataset.images[i];
    for (std::size_t k = 0; k < di.instances.size(); ++k) {
      InstanceRecord rec;
      rec.image_index = static_cast<int>(i);
      rec.instance_index = static_cast<int>(k);
      rec.image_id = di.id;
      rec.frame_id = di.frame_id;
      rec.label = di.instances[k].label;
      rec.attributes = di.instances[k].attributes;
      rec.probabilities = preds[i][k].probabilities;
      rec.selected = preds[i][k].selected;
      rec.predicted = static_cast<int>(
          std::max_element(rec.probabilities.begin(), rec.probabilities.end()) -
          rec.probabilities.begin());
      report.instances.push_back(std::move(rec));
    }
  }

  const int num_classes = static_cast<int>(dataset.class_names.size());
  report.ap.assign(num_classes, std::numeric_limits<double>::quiet_NaN());
  report.ap_defined.assign(num_classes, false);
  report.curves.resize(num_classes);

  // Score/label table, per instance or per frame.
  std::vector<std::vector<double>> unit_scores;
  std::vector<std::vector<int>> unit_labels;  // [class][unit]
  unit_labels.resize(num_classes);
  if (!opts.frame_level) {
    for (const InstanceRecord& rec : report.instances) {
      unit_scores.push_back(rec.probabilities);
      for (int c = 0; c < num_classes; ++c) {
        const int y = dataset.multilabel ? (rec.attributes[c] == 1.0 ? 1 : 0)
                                         : (rec.label == c ? 1 : 0);
        unit_labels[c].push_back(y);
      }
    }
  } else {
    std::vector<std::pair<int, std::vector<double>>> grouped;
    std::map<int, std::vector<int>> frame_labels;
    for (const InstanceRecord& rec : report.instances) {
      grouped.emplace_back(rec.frame_id, rec.probabilities);
      auto [it, fresh] = frame_labels.try_emplace(rec.frame_id, num_classes, 0);
      for (int c = 0; c < num_classes; ++c) {
        const int y = dataset.multilabel ? (rec.attributes[c] == 1.0 ? 1 : 0)
                                         : (rec.label == c ? 1 : 0);
        it->second[c] = std::max(it->second[c], y);
      }
    }
    for (const auto& [frame, scores] : frame_level(grouped)) {
      unit_scores.push_back(scores);
      for (int c = 0; c < num_classes; ++c) {
        unit_labels[c].push_back(frame_labels.at(frame)[c]);
      }
    }
  }

  double ap_sum = 0.0;
  int ap_count = 0;
  for (int c = 0; c < num_classes; ++c) {
    std::vector<double> scores;
    scores.reserve(unit_scores.size());
    for (const std::vector<double>& s : unit_scores) scores.push_back(s[c]);
    const int positives =
        std::accumulate(unit_labels[c].begin(), unit_labels[c].end(), 0);
    if (positives == 0) {
      report.warnings.push_back("class " + dataset.class_names[c] +
                                " has no positives; AP omitted");
      continue;
    }
    report.ap[c] = average_precision(scores, unit_labels[c], opts.interpolated_ap);
    report.ap_defined[c] = true;
    report.curves[c] = pr_curve(scores, unit_labels[c]);
    ap_sum += report.ap[c];
    ++ap_count;
  }
  report.map = ap_count ? ap_sum / ap_count : std::numeric_limits<double>::quiet_NaN();
  return report;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "classes: " << class_names.size() << "\n";
  out << "level: " << (frame_level ? "frame" : "instance") << "\n";
  out << "ap_variant: " << (interpolated ? "11point" : "uninterpolated") << "\n";
  out << "instances: " << instances.size() << "\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    out << "ap." << class_names[c] << ": ";
    if (ap_defined[c]) {
      out << ap[c];
    } else {
      out << "omitted";
    }
    out << "\n";
  }
  out << "map: " << map << "\n";
  for (const std::string& w : warnings) out << "warning: " << w << "\n";
  return out.str();
}

void EvalReport::write_pr_csv(std::ostream& out) const {
  out.precision(17);
  out << "class,threshold,precision,recall\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    for (const PRPoint& p : curves[c]) {
      out << class_names[c] << ',' << p.threshold << ',' << p.precision << ','
          << p.recall << '\n';
    }
  }
}

void EvalReport::write_selections(std::ostream& out) const {
  out.precision(17);
  out << "instance,frame,action,x1,y1,x2,y2,extra\n";
  for (const InstanceRecord& rec : instances) {
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      out << rec.image_id << '#' << rec.instance_index << ',' << rec.frame_id << ','
          << class_names[c] << ',';
      const std::vector<Region>& sel = c < rec.selected.size() ? rec.selected[c]
                                                               : std::vector<Region>{};
      if (sel.empty()) {
        out << ",,,,";
      } else {
        out << sel[0].x1 << ',' << sel[0].y1 << ',' << sel[0].x2 << ',' << sel[0].y2 << ',';
        for (std::size_t k = 1; k < sel.size(); ++k) {
          if (k > 1) out << ' ';
          out << sel[k].x1 << ' ' << sel[k].y1 << ' ' << sel[k].x2 << ' ' << sel[k].y2;
        }
      }
      out << '\n';
    }
  }
}

CueOverlapStats cue_overlap(const EvalReport& report, const Dataset& dataset,
                            double iou_threshold) {
  CueOverlapStats stats;
  double iou_sum = 0.0;
  for (const InstanceRecord& rec : report.instances) {
    const Instance& inst =
        dataset.images[rec.image_index].instances[rec.instance_index];
    if (dataset.multilabel || inst.cues.empty()) continue;
    if (rec.predicted != rec.label) continue;
    if (static_cast<std::size_t>(rec.predicted) >= rec.selected.size() ||
        rec.selected[rec.predicted].empty()) {
      continue;
    }
    double best = 0.0;
    for (const Region& sel : rec.selected[rec.predicted]) {
      for (const Region& cue : inst.cues) best = std::max(best, iou(sel, cue));
    }
    ++stats.considered;
    iou_sum += best;
    if (best >= iou_threshold) ++stats.hits;
  }
  stats.mean_iou = stats.considered ? iou_sum / stats.considered : 0.0;
  return stats;
}

}  // namespace rstar
