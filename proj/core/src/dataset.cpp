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
#include "rstar/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "binio.hpp"
#include "rstar/error.hpp"
#include "rstar/rng.hpp"

namespace rstar {

namespace {

constexpr int kGlyphKinds = 4;
const char* kGlyphNames[kGlyphKinds] = {"disk", "cross", "bar", "ring"};
const std::uint8_t kGlyphColors[kGlyphKinds][3] = {
    {226, 66, 66}, {64, 214, 64}, {76, 114, 232}, {224, 206, 58}};
const std::uint8_t kPersonColor[3] = {198, 198, 198};
const std::uint8_t kPersonBorder[3] = {110, 110, 110};
const std::uint8_t kBackground[3] = {28, 28, 28};

bool glyph_mask(int kind, double u, double v, double size) {
  const double c = size / 2.0;
  const double du = u + 0.5 - c;
  const double dv = v + 0.5 - c;
  switch (kind) {
    case 0:  // disk
      return du * du + dv * dv <= 0.45 * size * 0.45 * size;
    case 1:  // cross
      return std::abs(du) <= 0.17 * size || std::abs(dv) <= 0.17 * size;
    case 2:  // bar
      return std::abs(dv) <= 0.18 * size;
    case 3: {  // ring
      const double r2 = du * du + dv * dv;
      return r2 <= 0.45 * size * 0.45 * size && r2 >= 0.26 * size * 0.26 * size;
    }
    default:
      return false;
  }
}

void draw_glyph(Image& img, int kind, int x0, int y0, int size, double contrast) {
  for (int v = 0; v < size; ++v) {
    for (int u = 0; u < size; ++u) {
      const int x = x0 + u, y = y0 + v;
      if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
      if (!glyph_mask(kind, u, v, size)) continue;
      for (int c = 0; c < img.channels; ++c) {
        const double base = img.at(x, y, c);
        const double col = kGlyphColors[kind][c % 3];
        img.at(x, y, c) =
            static_cast<std::uint8_t>(std::lround(base + contrast * (col - base)));
      }
    }
  }
}

void draw_person(Image& img, int x0, int y0, int w, int h) {
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const int x = x0 + u, y = y0 + v;
      if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
      const bool border = u < 2 || v < 2 || u >= w - 2 || v >= h - 2;
      const std::uint8_t* col = border ? kPersonBorder : kPersonColor;
      for (int c = 0; c < img.channels; ++c) img.at(x, y, c) = col[c % 3];
    }
  }
}

/// L-infinity gap between two boxes; 0 when they overlap or touch.
double box_gap(const Region& a, const Region& b) {
  const double gx = std::max(a.x1 - b.x2, b.x1 - a.x2);
  const double gy = std::max(a.y1 - b.y2, b.y1 - a.y2);
  return std::max({gx, gy, 0.0});
}

struct Layout {
  std::vector<Region> persons;
  std::vector<Region> cues;                 // parallel with cue_kinds
  std::vector<int> cue_kinds;               // glyph kind per cue
  std::vector<std::vector<int>> cue_owner;  // cue indices per instance
  std::vector<Region> distractor_boxes;
  std::vector<int> distractor_kinds;
};

bool clear_of(const Region& r, const std::vector<Region>& others, double min_gap) {
  for (const Region& o : others) {
    if (box_gap(r, o) < min_gap) return false;
  }
  return true;
}

// Person boxes need enough clearance from everything but their own cue ring:
// the trunk's receptive field must not let the primary stream peek at a cue.
constexpr double kPersonClearance = 10.0;
constexpr double kObjectClearance = 4.0;

std::optional<Region> place_box(Rng& rng, double w, double h, double img_w, double img_h,
                                int tries, auto&& ok) {
  for (int t = 0; t < tries; ++t) {
    const double x = std::floor(rng.uniform(0.0, img_w - w + 1.0));
    const double y = std::floor(rng.uniform(0.0, img_h - h + 1.0));
    Region r{x, y, x + w, y + h};
    if (ok(r)) return r;
  }
  return std::nullopt;
}

/// Places persons, cues and distractors for one image; nullopt on failure.
std::optional<Layout> try_layout(Rng& rng, const SyntheticConfig& cfg,
                                 const std::vector<std::vector<int>>& cue_kinds_per_inst) {
  const double W = cfg.width, H = cfg.height;
  Layout lay;
  lay.cue_owner.resize(cue_kinds_per_inst.size());

  for (std::size_t i = 0; i < cue_kinds_per_inst.size(); ++i) {
    const double pw = static_cast<double>(rng.uniform_int(16, 22));
    const double ph = static_cast<double>(rng.uniform_int(24, 30));
    auto person = place_box(rng, pw, ph, W, H, 2000, [&](const Region& r) {
      return clear_of(r, lay.persons, kObjectClearance) &&
             clear_of(r, lay.cues, kPersonClearance);
    });
    if (!person) return std::nullopt;
    person->source = RegionSource::kGroundTruth;
    lay.persons.push_back(*person);

    for (int kind : cue_kinds_per_inst[i]) {
      auto cue = place_box(rng, cfg.cue_size, cfg.cue_size, W, H, 2000, [&](const Region& r) {
        const double own = box_gap(r, lay.persons[i]);
        if (own < cfg.cue_ring_min || own > cfg.cue_ring_max) return false;
        for (std::size_t p = 0; p < lay.persons.size(); ++p) {
          if (p != i && box_gap(r, lay.persons[p]) < kPersonClearance) return false;
        }
        return clear_of(r, lay.cues, kObjectClearance);
      });
      if (!cue) return std::nullopt;
      lay.cue_owner[i].push_back(static_cast<int>(lay.cues.size()));
      lay.cues.push_back(*cue);
      lay.cue_kinds.push_back(kind);
    }
  }
  return lay;
}

void add_distractors(Rng& rng, const SyntheticConfig& cfg, Layout& lay,
                     const std::vector<int>& used_kinds, int num_kinds) {
  std::vector<int> free_kinds;
  for (int k = 0; k < num_kinds; ++k) {
    if (std::find(used_kinds.begin(), used_kinds.end(), k) == used_kinds.end()) {
      free_kinds.push_back(k);
    }
  }
  if (free_kinds.empty()) return;
  for (int d = 0; d < cfg.distractors; ++d) {
    const int kind = free_kinds[rng.below(free_kinds.size())];
    auto box = place_box(rng, cfg.cue_size, cfg.cue_size, cfg.width, cfg.height, 500,
                         [&](const Region& r) {
                           return clear_of(r, lay.persons, kPersonClearance) &&
                                  clear_of(r, lay.cues, kObjectClearance) &&
                                  clear_of(r, lay.distractor_boxes, kObjectClearance);
                         });
    if (!box) continue;  // distractors are best-effort texture
    lay.distractor_boxes.push_back(*box);
    lay.distractor_kinds.push_back(kind);
  }
}

void add_noise(Rng& rng, double amplitude, Image& img) {
  if (amplitude <= 0.0) return;
  for (std::uint8_t& p : img.pixels) {
    const double v = p + 255.0 * rng.uniform(-amplitude, amplitude);
    p = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
}

/// Balanced label pool: every class appears floor(total/C) or one more time.
std::vector<int> balanced_pool(int total, int num_classes, Rng& rng) {
  std::vector<int> pool;
  pool.reserve(total);
  for (int i = 0; i < total; ++i) pool.push_back(i % num_classes);
  for (std::size_t i = pool.size(); i > 1; --i) {  // Fisher-Yates
    std::swap(pool[i - 1], pool[rng.below(i)]);
  }
  return pool;
}

Dataset generate_split(const SyntheticConfig& cfg, int total, const std::string& prefix,
                       std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.multilabel = cfg.multilabel;
  if (cfg.multilabel) {
    for (int a = 0; a < cfg.num_attributes; ++a) ds.class_names.push_back(kGlyphNames[a]);
  } else {
    ds.class_names.push_back("other");
    for (int c = 1; c < cfg.num_classes; ++c) ds.class_names.push_back(kGlyphNames[c - 1]);
  }

  std::vector<int> pool;
  std::size_t pool_pos = 0;
  if (!cfg.multilabel) pool = balanced_pool(total, cfg.num_classes, rng);

  int made = 0;
  int image_index = 0;
  while (made < total) {
    int want = static_cast<int>(rng.uniform_int(cfg.min_instances, cfg.max_instances));
    want = std::min(want, total - made);

    // Instance labels for this image, distinct in single-label mode.
    std::vector<int> labels;
    std::vector<std::vector<double>> attrs;
    if (cfg.multilabel) {
      for (int i = 0; i < want; ++i) {
        std::vector<double> a(cfg.num_attributes);
        for (double& v : a) v = rng.below(2) ? 1.0 : 0.0;
        attrs.push_back(std::move(a));
        labels.push_back(0);
      }
    } else {
      for (int i = 0; i < want; ++i) {
        std::size_t j = pool_pos;
        while (j < pool.size() &&
               std::find(labels.begin(), labels.end(), pool[j]) != labels.end()) {
          ++j;
        }
        if (j == pool.size()) break;  // only duplicates left; shorten this image
        std::swap(pool[pool_pos], pool[j]);
        labels.push_back(pool[pool_pos]);
        ++pool_pos;
      }
    }
    const int n = static_cast<int>(cfg.multilabel ? attrs.size() : labels.size());

    // Cue glyph kinds per instance.
    std::vector<std::vector<int>> cue_kinds(n);
    std::vector<int> used_kinds;
    for (int i = 0; i < n; ++i) {
      if (cfg.multilabel) {
        for (int a = 0; a < cfg.num_attributes; ++a) {
          if (attrs[i][a] == 1.0) {
            cue_kinds[i].push_back(a);
            used_kinds.push_back(a);
          }
        }
      } else if (labels[i] != 0) {
        cue_kinds[i].push_back(labels[i] - 1);
        used_kinds.push_back(labels[i] - 1);
      }
    }

    std::optional<Layout> lay;
    for (int attempt = 0; attempt < 20 && !lay; ++attempt) {
      lay = try_layout(rng, cfg, cue_kinds);
    }
    if (!lay) {
      throw Error("synth_generate: glyph placement infeasible for " +
                  std::to_string(n) + " instances on a " + std::to_string(cfg.width) + "x" +
                  std::to_string(cfg.height) + " image; relax the config");
    }
    const int glyph_pool = cfg.multilabel ? cfg.num_attributes : cfg.num_classes - 1;
    add_distractors(rng, cfg, *lay, used_kinds, glyph_pool);

    DatasetImage di;
    std::ostringstream id;
    id << prefix << "_" << image_index;
    di.id = id.str();
    di.frame_id = image_index;
    di.image = make_image(cfg.width, cfg.height, cfg.channels);
    for (int c = 0; c < cfg.channels; ++c) {
      for (std::size_t p = c; p < di.image.pixels.size(); p += cfg.channels) {
        di.image.pixels[p] = kBackground[c % 3];
      }
    }
    for (const Region& p : lay->persons) {
      draw_person(di.image, static_cast<int>(p.x1), static_cast<int>(p.y1),
                  static_cast<int>(p.width()), static_cast<int>(p.height()));
    }
    for (std::size_t k = 0; k < lay->cues.size(); ++k) {
      draw_glyph(di.image, lay->cue_kinds[k], static_cast<int>(lay->cues[k].x1),
                 static_cast<int>(lay->cues[k].y1), static_cast<int>(cfg.cue_size), 1.0);
    }
    for (std::size_t k = 0; k < lay->distractor_boxes.size(); ++k) {
      draw_glyph(di.image, lay->distractor_kinds[k],
                 static_cast<int>(lay->distractor_boxes[k].x1),
                 static_cast<int>(lay->distractor_boxes[k].y1),
                 static_cast<int>(cfg.cue_size), cfg.distractor_contrast);
    }
    add_noise(rng, cfg.noise, di.image);

    for (int i = 0; i < n; ++i) {
      Instance inst;
      inst.person = lay->persons[i];
      inst.label = cfg.multilabel ? 0 : labels[i];
      if (cfg.multilabel) inst.attributes = attrs[i];
      for (int cue_idx : lay->cue_owner[i]) inst.cues.push_back(lay->cues[cue_idx]);
      di.instances.push_back(std::move(inst));
    }
    made += n;
    ++image_index;
    ds.images.push_back(std::move(di));
  }
  return ds;
}

}  // namespace

void validate_synthetic_config(const SyntheticConfig& cfg) {
  if (cfg.width < 32 || cfg.height < 32) {
    throw std::invalid_argument("synthetic images must be at least 32x32");
  }
  if (cfg.channels != 3) throw std::invalid_argument("synthetic images are RGB (3 channels)");
  if (!cfg.multilabel && (cfg.num_classes < 2 || cfg.num_classes > kGlyphKinds + 1)) {
    throw std::invalid_argument("num_classes must be in [2, " +
                                std::to_string(kGlyphKinds + 1) + "] (one glyph per class)");
  }
  if (cfg.multilabel && (cfg.num_attributes < 1 || cfg.num_attributes > kGlyphKinds)) {
    throw std::invalid_argument("num_attributes must be in [1, " +
                                std::to_string(kGlyphKinds) + "]");
  }
  if (cfg.min_instances < 1 || cfg.max_instances < cfg.min_instances) {
    throw std::invalid_argument("instance count range is invalid");
  }
  if (cfg.cue_ring_min < 0 || cfg.cue_ring_max < cfg.cue_ring_min) {
    throw std::invalid_argument("cue ring bounds are invalid");
  }
  if (cfg.cue_size < 4) throw std::invalid_argument("cue_size must be at least 4");
  if (cfg.noise < 0 || cfg.noise > 1) throw std::invalid_argument("noise must be in [0,1]");
  if (cfg.train_instances < 1 || cfg.test_instances < 1) {
    throw std::invalid_argument("train/test instance counts must be positive");
  }
}

SyntheticData synth_generate(const SyntheticConfig& cfg) {
  validate_synthetic_config(cfg);
  SyntheticData data;
  data.train = generate_split(cfg, cfg.train_instances, "train", derive_seed(cfg.seed, 1));
  data.test = generate_split(cfg, cfg.test_instances, "test", derive_seed(cfg.seed, 2));
  return data;
}

int decode_cue_glyph(const Image& img, const Instance& inst, const SyntheticConfig& cfg) {
  if (inst.cues.empty()) return -1;
  const Region& cue = inst.cues.front();
  const int x0 = static_cast<int>(cue.x1), y0 = static_cast<int>(cue.y1);
  const int size = static_cast<int>(cfg.cue_size);
  int best_kind = -1;
  double best_err = 0.0;
  for (int kind = 0; kind < kGlyphKinds; ++kind) {
    double err = 0.0;
    for (int v = 0; v < size; ++v) {
      for (int u = 0; u < size; ++u) {
        const bool on = glyph_mask(kind, u, v, cfg.cue_size);
        for (int c = 0; c < img.channels; ++c) {
          const double expect = on ? kGlyphColors[kind][c % 3] : kBackground[c % 3];
          err += std::abs(expect - img.at(x0 + u, y0 + v, c));
        }
      }
    }
    if (best_kind < 0 || err < best_err) {
      best_kind = kind;
      best_err = err;
    }
  }
  return best_kind;
}

std::size_t Dataset::num_instances() const {
  std::size_t n = 0;
  for (const DatasetImage& img : images) n += img.instances.size();
  return n;
}

namespace {

using nlohmann::json;

json region_to_json(const Region& r) {
  return json::array({r.x1, r.y1, r.x2, r.y2, static_cast<int>(r.source)});
}

Region region_from_json(const json& j) {
  Region r{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
           j.at(3).get<double>()};
  if (j.size() > 4) r.source = static_cast<RegionSource>(j.at(4).get<int>());
  return r;
}

constexpr char kDatasetMagic[] = "RSTARDSET\n";
constexpr std::uint32_t kDatasetVersion = 1;

}  // namespace

void save_dataset(const std::string& path, const Dataset& dataset) {
  json header;
  header["class_names"] = dataset.class_names;
  header["multilabel"] = dataset.multilabel;
  header["proposal_file"] = dataset.proposal_file;

  std::vector<std::uint8_t> blob;
  json images = json::array();
  for (const DatasetImage& di : dataset.images) {
    json ji;
    ji["id"] = di.id;
    ji["frame_id"] = di.frame_id;
    ji["width"] = di.image.width;
    ji["height"] = di.image.height;
    ji["channels"] = di.image.channels;
    json insts = json::array();
    for (const Instance& inst : di.instances) {
      json jinst;
      jinst["person"] = region_to_json(inst.person);
      jinst["label"] = inst.label;
      jinst["attributes"] = inst.attributes;
      json cues = json::array();
      for (const Region& c : inst.cues) cues.push_back(region_to_json(c));
      jinst["cues"] = cues;
      insts.push_back(std::move(jinst));
    }
    ji["instances"] = std::move(insts);
    images.push_back(std::move(ji));
    blob.insert(blob.end(), di.image.pixels.begin(), di.image.pixels.end());
  }
  header["images"] = std::move(images);
  header["pixel_bytes"] = blob.size();
  header["pixel_crc32"] = detail::crc32_bytes(blob.data(), blob.size());

  const std::string htext = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file: " + path);
  detail::write_bytes(out, kDatasetMagic, sizeof(kDatasetMagic) - 1);
  detail::write_u32le(out, kDatasetVersion);
  detail::write_u32le(out, detail::crc32_bytes(htext.data(), htext.size()));
  detail::write_u64le(out, htext.size());
  detail::write_bytes(out, htext.data(), htext.size());
  detail::write_bytes(out, blob.data(), blob.size());
  if (!out.good()) throw IoError("short write to dataset file: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path);

  char magic[sizeof(kDatasetMagic) - 1];
  detail::read_bytes(in, magic, sizeof(magic), "dataset magic");
  if (std::string_view(magic, sizeof(magic)) != kDatasetMagic) {
    throw FormatError(path + ": not a dataset container (bad magic)");
  }
  const std::uint32_t version = detail::read_u32le(in, "dataset version");
  if (version != kDatasetVersion) {
    throw FormatError(path + ": unsupported dataset version " + std::to_string(version));
  }
  const std::uint32_t header_crc = detail::read_u32le(in, "dataset header crc");
  const std::uint64_t header_len = detail::read_u64le(in, "dataset header length");
  std::string htext(header_len, '\0');
  detail::read_bytes(in, htext.data(), header_len, "dataset header");
  if (detail::crc32_bytes(htext.data(), htext.size()) != header_crc) {
    throw ChecksumError(path + ": dataset header checksum mismatch");
  }
  json header;
  try {
    header = json::parse(htext);
  } catch (const json::exception& e) {
    throw FormatError(path + ": dataset header is not valid JSON: " + e.what());
  }

  Dataset ds;
  try {
    ds.class_names = header.at("class_names").get<std::vector<std::string>>();
    ds.multilabel = header.at("multilabel").get<bool>();
    ds.proposal_file = header.value("proposal_file", std::string());
    const std::uint64_t pixel_bytes = header.at("pixel_bytes").get<std::uint64_t>();
    std::vector<std::uint8_t> blob(pixel_bytes);
    detail::read_bytes(in, blob.data(), blob.size(), "dataset pixels");
    if (detail::crc32_bytes(blob.data(), blob.size()) !=
        header.at("pixel_crc32").get<std::uint32_t>()) {
      throw ChecksumError(path + ": dataset pixel checksum mismatch");
    }
    std::size_t offset = 0;
    for (const json& ji : header.at("images")) {
      DatasetImage di;
      di.id = ji.at("id").get<std::string>();
      di.frame_id = ji.at("frame_id").get<int>();
      di.image = make_image(ji.at("width").get<int>(), ji.at("height").get<int>(),
                            ji.at("channels").get<int>());
      const std::size_t n = di.image.pixels.size();
      if (offset + n > blob.size()) {
        throw FormatError(path + ": truncated pixel data for image " + di.id);
      }
      std::copy(blob.begin() + offset, blob.begin() + offset + n, di.image.pixels.begin());
      offset += n;
      for (const json& jinst : ji.at("instances")) {
        Instance inst;
        inst.person = region_from_json(jinst.at("person"));
        inst.label = jinst.at("label").get<int>();
        inst.attributes = jinst.at("attributes").get<std::vector<double>>();
        for (const json& jc : jinst.at("cues")) inst.cues.push_back(region_from_json(jc));
        di.instances.push_back(std::move(inst));
      }
      ds.images.push_back(std::move(di));
    }
  } catch (const json::exception& e) {
    throw FormatError(path + ": malformed dataset header: " + e.what());
  }
  return ds;
}

bool dataset_equal(const Dataset& a, const Dataset& b) {
  auto region_eq = [](const Region& x, const Region& y) {
    return x.same_coords(y) && x.source == y.source;
  };
  if (a.class_names != b.class_names || a.multilabel != b.multilabel ||
      a.proposal_file != b.proposal_file || a.images.size() != b.images.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    const DatasetImage& x = a.images[i];
    const DatasetImage& y = b.images[i];
    if (x.id != y.id || x.frame_id != y.frame_id || x.image.width != y.image.width ||
        x.image.height != y.image.height || x.image.channels != y.image.channels ||
        x.image.pixels != y.image.pixels || x.instances.size() != y.instances.size()) {
      return false;
    }
    for (std::size_t k = 0; k < x.instances.size(); ++k) {
      const Instance& p = x.instances[k];
      const Instance& q = y.instances[k];
      if (!region_eq(p.person, q.person) || p.label != q.label ||
          p.attributes != q.attributes || p.cues.size() != q.cues.size()) {
        return false;
      }
      for (std::size_t c = 0; c < p.cues.size(); ++c) {
        if (!region_eq(p.cues[c], q.cues[c])) return false;
      }
    }
  }
  return true;
}

}  // namespace rstar
