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
#include "rstar/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rstar/error.hpp"

namespace rstar::ad {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_rank(const TensorPtr& t, std::size_t rank, const char* what) {
  if (!t || t->shape.size() != rank) {
    throw std::invalid_argument(std::string(what) + ": expected rank " +
                                std::to_string(rank) + " tensor, got " +
                                (t ? shape_str(t->shape) : std::string("null")));
  }
}

}  // namespace

TensorPtr conv2d(Graph& g, const TensorPtr& input, const TensorPtr& weight,
                 const TensorPtr& bias, int stride, int padding) {
  require_rank(input, 3, "conv2d input");
  require_rank(weight, 4, "conv2d weight");
  require_rank(bias, 1, "conv2d bias");
  require(stride >= 1, "conv2d: stride must be >= 1");
  require(padding >= 0, "conv2d: padding must be >= 0");
  const int cin = input->shape[0], h = input->shape[1], w = input->shape[2];
  const int cout = weight->shape[0], k = weight->shape[2];
  require(weight->shape[1] == cin && weight->shape[2] == weight->shape[3],
          "conv2d: weight " + shape_str(weight->shape) + " does not match input " +
              shape_str(input->shape));
  require(bias->shape[0] == cout, "conv2d: bias " + shape_str(bias->shape) +
                                      " does not match weight " + shape_str(weight->shape));
  const int hp = h + 2 * padding, wp = w + 2 * padding;
  require(hp >= k && wp >= k, "conv2d: spatial dims " + shape_str(input->shape) +
                                  " smaller than kernel " + shape_str(weight->shape));
  const int ho = (hp - k) / stride + 1;
  const int wo = (wp - k) / stride + 1;

  TensorPtr out = g.make({cout, ho, wo});
  const double* in = input->values.data();
  const double* wt = weight->values.data();
  double* ov = out->values.data();

  for (int co = 0; co < cout; ++co) {
    const double b = bias->values[co];
    double* oc = ov + static_cast<std::size_t>(co) * ho * wo;
    std::fill(oc, oc + static_cast<std::size_t>(ho) * wo, b);
    for (int ci = 0; ci < cin; ++ci) {
      const double* ic = in + static_cast<std::size_t>(ci) * h * w;
      for (int ki = 0; ki < k; ++ki) {
        for (int kj = 0; kj < k; ++kj) {
          const double wv = wt[((static_cast<std::size_t>(co) * cin + ci) * k + ki) * k + kj];
          if (wv == 0.0) continue;
          for (int y = 0; y < ho; ++y) {
            const int iy = y * stride + ki - padding;
            if (iy < 0 || iy >= h) continue;
            const double* irow = ic + static_cast<std::size_t>(iy) * w;
            double* orow = oc + static_cast<std::size_t>(y) * wo;
            for (int x = 0; x < wo; ++x) {
              const int ix = x * stride + kj - padding;
              if (ix < 0 || ix >= w) continue;
              orow[x] += wv * irow[ix];
            }
          }
        }
      }
    }
  }

  g.record("conv2d", [input, weight, bias, out, stride, padding, cin, cout, h, w, k, ho, wo] {
    const double* go = out->grad.data();
    const double* in = input->values.data();
    const double* wt = weight->values.data();
    if (bias->requires_grad) {
      bias->ensure_grad();
      for (int co = 0; co < cout; ++co) {
        double s = 0.0;
        const double* gc = go + static_cast<std::size_t>(co) * ho * wo;
        for (int i = 0; i < ho * wo; ++i) s += gc[i];
        bias->grad[co] += s;
      }
    }
    if (weight->requires_grad) {
      weight->ensure_grad();
      double* gw = weight->grad.data();
      for (int co = 0; co < cout; ++co) {
        const double* gc = go + static_cast<std::size_t>(co) * ho * wo;
        for (int ci = 0; ci < cin; ++ci) {
          const double* ic = in + static_cast<std::size_t>(ci) * h * w;
          for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
              double s = 0.0;
              for (int y = 0; y < ho; ++y) {
                const int iy = y * stride + ki - padding;
                if (iy < 0 || iy >= h) continue;
                const double* irow = ic + static_cast<std::size_t>(iy) * w;
                const double* grow = gc + static_cast<std::size_t>(y) * wo;
                for (int x = 0; x < wo; ++x) {
                  const int ix = x * stride + kj - padding;
                  if (ix < 0 || ix >= w) continue;
                  s += grow[x] * irow[ix];
                }
              }
              gw[((static_cast<std::size_t>(co) * cin + ci) * k + ki) * k + kj] += s;
            }
          }
        }
      }
    }
    if (input->requires_grad) {
      input->ensure_grad();
      double* gi = input->grad.data();
      for (int co = 0; co < cout; ++co) {
        const double* gc = go + static_cast<std::size_t>(co) * ho * wo;
        for (int ci = 0; ci < cin; ++ci) {
          double* gic = gi + static_cast<std::size_t>(ci) * h * w;
          for (int ki = 0; ki < k; ++ki) {
            for (int kj = 0; kj < k; ++kj) {
              const double wv = wt[((static_cast<std::size_t>(co) * cin + ci) * k + ki) * k + kj];
              if (wv == 0.0) continue;
              for (int y = 0; y < ho; ++y) {
                const int iy = y * stride + ki - padding;
                if (iy < 0 || iy >= h) continue;
                double* girow = gic + static_cast<std::size_t>(iy) * w;
                const double* grow = gc + static_cast<std::size_t>(y) * wo;
                for (int x = 0; x < wo; ++x) {
                  const int ix = x * stride + kj - padding;
                  if (ix < 0 || ix >= w) continue;
                  girow[ix] += wv * grow[x];
                }
              }
            }
          }
        }
      }
    }
  });
  return out;
}

TensorPtr relu(Graph& g, const TensorPtr& input) {
  require(input != nullptr, "relu: null input");
  TensorPtr out = g.make(input->shape);
  const std::size_t n = input->values.size();
  std::uint64_t signs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = input->values[i] > 0.0;
    out->values[i] = pos ? input->values[i] : 0.0;
    signs = (signs << 1) | static_cast<std::uint64_t>(pos);
    if ((i & 63) == 63) {
      g.note_choice(signs);
      signs = 0;
    }
  }
  g.note_choice(signs);
  g.record("relu", [input, out, n] {
    if (!input->requires_grad) return;
    input->ensure_grad();
    for (std::size_t i = 0; i < n; ++i) {
      if (input->values[i] > 0.0) input->grad[i] += out->grad[i];
    }
  });
  return out;
}

TensorPtr max_pool2d(Graph& g, const TensorPtr& input, int window, int stride) {
  require_rank(input, 3, "max_pool2d input");
  require(window >= 1 && stride >= 1, "max_pool2d: window and stride must be >= 1");
  const int c = input->shape[0], h = input->shape[1], w = input->shape[2];
  require(window <= h && window <= w,
          "max_pool2d: window " + std::to_string(window) + " larger than input " +
              shape_str(input->shape));
  const int ho = (h - window) / stride + 1;
  const int wo = (w - window) / stride + 1;

  TensorPtr out = g.make({c, ho, wo});
  auto argmax = std::make_shared<std::vector<int>>(static_cast<std::size_t>(c) * ho * wo);
  const double* in = input->values.data();
  for (int ci = 0; ci < c; ++ci) {
    const double* ic = in + static_cast<std::size_t>(ci) * h * w;
    for (int y = 0; y < ho; ++y) {
      for (int x = 0; x < wo; ++x) {
        int best = -1;
        double bv = 0.0;
        for (int ky = 0; ky < window; ++ky) {
          const int iy = y * stride + ky;
          for (int kx = 0; kx < window; ++kx) {
            const int ix = x * stride + kx;
            const int idx = iy * w + ix;
            if (best < 0 || ic[idx] > bv) {
              best = idx;
              bv = ic[idx];
            }
          }
        }
        const std::size_t o = (static_cast<std::size_t>(ci) * ho + y) * wo + x;
        out->values[o] = bv;
        (*argmax)[o] = best;
        g.note_choice(static_cast<std::uint64_t>(best));
      }
    }
  }
  g.record("max_pool2d", [input, out, argmax, c, h, w, ho, wo] {
    if (!input->requires_grad) return;
    input->ensure_grad();
    for (int ci = 0; ci < c; ++ci) {
      double* gic = input->grad.data() + static_cast<std::size_t>(ci) * h * w;
      for (int i = 0; i < ho * wo; ++i) {
        const std::size_t o = static_cast<std::size_t>(ci) * ho * wo + i;
        gic[(*argmax)[o]] += out->grad[o];
      }
    }
  });
  return out;
}

TensorPtr linear(Graph& g, const TensorPtr& x, const TensorPtr& w,
                 const TensorPtr& b) {
  require_rank(x, 1, "linear input");
  require_rank(w, 2, "linear weight");
  require_rank(b, 1, "linear bias");
  const int d = x->shape[0];
  const int dout = w->shape[0];
  require(w->shape[1] == d, "linear: weight " + shape_str(w->shape) +
                                " does not match input " + shape_str(x->shape));
  require(b->shape[0] == dout, "linear: bias " + shape_str(b->shape) +
                                   " does not match weight " + shape_str(w->shape));
  TensorPtr out = g.make({dout});
  const double* xv = x->values.data();
  const double* wv = w->values.data();
  for (int i = 0; i < dout; ++i) {
    const double* row = wv + static_cast<std::size_t>(i) * d;
    double s = b->values[i];
    for (int j = 0; j < d; ++j) s += row[j] * xv[j];
    out->values[i] = s;
  }
  g.record("linear", [x, w, b, out, d, dout] {
    const double* go = out->grad.data();
    if (b->requires_grad) {
      b->ensure_grad();
      for (int i = 0; i < dout; ++i) b->grad[i] += go[i];
    }
    if (w->requires_grad) {
      w->ensure_grad();
      const double* xv = x->values.data();
      for (int i = 0; i < dout; ++i) {
        double* grow = w->grad.data() + static_cast<std::size_t>(i) * d;
        const double gi = go[i];
        if (gi == 0.0) continue;
        for (int j = 0; j < d; ++j) grow[j] += gi * xv[j];
      }
    }
    if (x->requires_grad) {
      x->ensure_grad();
      const double* wv = w->values.data();
      for (int i = 0; i < dout; ++i) {
        const double gi = go[i];
        if (gi == 0.0) continue;
        const double* row = wv + static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) x->grad[j] += gi * row[j];
      }
    }
  });
  return out;
}

TensorPtr roi_max_pool(Graph& g, const TensorPtr& features, const Region& roi,
                       double spatial_scale, int out_size) {
  require_rank(features, 3, "roi_max_pool features");
  require(out_size >= 1, "roi_max_pool: out_size must be >= 1");
  require(spatial_scale > 0.0, "roi_max_pool: spatial_scale must be > 0");
  if (!roi.valid()) throw std::invalid_argument("roi_max_pool: degenerate roi");
  const int c = features->shape[0], h = features->shape[1], w = features->shape[2];

  // Feature-grid span of the roi: floor on start, ceil on end, clamped.
  const int fx1 = std::max(0, static_cast<int>(std::floor(roi.x1 * spatial_scale)));
  const int fy1 = std::max(0, static_cast<int>(std::floor(roi.y1 * spatial_scale)));
  const int fx2 = std::min(w, static_cast<int>(std::ceil(roi.x2 * spatial_scale)));
  const int fy2 = std::min(h, static_cast<int>(std::ceil(roi.y2 * spatial_scale)));
  if (fx1 >= fx2 || fy1 >= fy2) {
    throw std::invalid_argument("roi_max_pool: roi (" + std::to_string(roi.x1) + "," +
                                std::to_string(roi.y1) + "," + std::to_string(roi.x2) + "," +
                                std::to_string(roi.y2) + ") at scale " +
                                std::to_string(spatial_scale) +
                                " lies outside the feature map " + shape_str(features->shape));
  }
  const int fw = fx2 - fx1, fh = fy2 - fy1;

  TensorPtr out = g.make({c, out_size, out_size});
  auto argmax =
      std::make_shared<std::vector<int>>(static_cast<std::size_t>(c) * out_size * out_size);
  const double* fv = features->values.data();
  for (int by = 0; by < out_size; ++by) {
    // Even real-valued partition, rounded outward to cover >= 1 cell.
    int y0 = fy1 + static_cast<int>(std::floor(static_cast<double>(fh) * by / out_size));
    int y1 = fy1 + static_cast<int>(std::ceil(static_cast<double>(fh) * (by + 1) / out_size));
    y0 = std::min(y0, fy2 - 1);
    y1 = std::max(y1, y0 + 1);
    for (int bx = 0; bx < out_size; ++bx) {
      int x0 = fx1 + static_cast<int>(std::floor(static_cast<double>(fw) * bx / out_size));
      int x1 = fx1 + static_cast<int>(std::ceil(static_cast<double>(fw) * (bx + 1) / out_size));
      x0 = std::min(x0, fx2 - 1);
      x1 = std::max(x1, x0 + 1);
      for (int ci = 0; ci < c; ++ci) {
        const double* fc = fv + static_cast<std::size_t>(ci) * h * w;
        int best = -1;
        double bv = 0.0;
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) {
            const int idx = y * w + x;
            if (best < 0 || fc[idx] > bv) {
              best = idx;
              bv = fc[idx];
            }
          }
        }
        const std::size_t o = (static_cast<std::size_t>(ci) * out_size + by) * out_size + bx;
        out->values[o] = bv;
        (*argmax)[o] = best;
        g.note_choice(static_cast<std::uint64_t>(best));
      }
    }
  }
  g.record("roi_max_pool", [features, out, argmax, c, h, w, out_size] {
    if (!features->requires_grad) return;
    features->ensure_grad();
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    for (int ci = 0; ci < c; ++ci) {
      double* gf = features->grad.data() + ci * plane;
      for (int i = 0; i < out_size * out_size; ++i) {
        const std::size_t o = static_cast<std::size_t>(ci) * out_size * out_size + i;
        gf[(*argmax)[o]] += out->grad[o];
      }
    }
  });
  return out;
}

TensorPtr flatten(Graph& g, const TensorPtr& input) {
  require(input != nullptr, "flatten: null input");
  TensorPtr out = g.make({static_cast<int>(input->numel())});
  out->values = input->values;
  g.record("flatten", [input, out] {
    if (!input->requires_grad) return;
    input->ensure_grad();
    for (std::size_t i = 0; i < out->grad.size(); ++i) input->grad[i] += out->grad[i];
  });
  return out;
}

TensorPtr add(Graph& g, const TensorPtr& a, const TensorPtr& b) {
  require(a && b && a->shape == b->shape,
          "add: shape mismatch " + (a ? shape_str(a->shape) : "null") + " vs " +
              (b ? shape_str(b->shape) : "null"));
  TensorPtr out = g.make(a->shape);
  for (std::size_t i = 0; i < out->values.size(); ++i) {
    out->values[i] = a->values[i] + b->values[i];
  }
  g.record("add", [a, b, out] {
    if (a->requires_grad) {
      a->ensure_grad();
      for (std::size_t i = 0; i < out->grad.size(); ++i) a->grad[i] += out->grad[i];
    }
    if (b->requires_grad) {
      b->ensure_grad();
      for (std::size_t i = 0; i < out->grad.size(); ++i) b->grad[i] += out->grad[i];
    }
  });
  return out;
}

TensorPtr scale(Graph& g, const TensorPtr& a, double factor) {
  require(a != nullptr, "scale: null input");
  TensorPtr out = g.make(a->shape);
  for (std::size_t i = 0; i < out->values.size(); ++i) out->values[i] = factor * a->values[i];
  g.record("scale", [a, out, factor] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < out->grad.size(); ++i) a->grad[i] += factor * out->grad[i];
  });
  return out;
}

TensorPtr stack_rows(Graph& g, const std::vector<TensorPtr>& rows) {
  require(!rows.empty(), "stack_rows: no rows");
  const int a = rows[0]->shape.empty() ? 0 : rows[0]->shape[0];
  for (const TensorPtr& r : rows) {
    require_rank(r, 1, "stack_rows row");
    require(r->shape[0] == a, "stack_rows: row shape mismatch " + shape_str(r->shape));
  }
  const int k = static_cast<int>(rows.size());
  TensorPtr out = g.make({k, a});
  for (int i = 0; i < k; ++i) {
    std::copy(rows[i]->values.begin(), rows[i]->values.end(),
              out->values.begin() + static_cast<std::size_t>(i) * a);
  }
  g.record("stack_rows", [rows, out, a] {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i]->requires_grad) continue;
      rows[i]->ensure_grad();
      const double* go = out->grad.data() + i * a;
      for (int j = 0; j < a; ++j) rows[i]->grad[j] += go[j];
    }
  });
  return out;
}

namespace {

RowMax reduce_max_rows_impl(Graph& g, const TensorPtr& scores,
                            const std::vector<std::uint8_t>* eligible) {
  require_rank(scores, 2, "reduce_max_rows scores");
  const int k = scores->shape[0], a = scores->shape[1];
  require(k >= 1, "reduce_max_rows: need at least one row");
  if (eligible) {
    require(eligible->size() == static_cast<std::size_t>(k) * a,
            "reduce_max_rows: eligibility mask size mismatch");
  }
  RowMax result;
  result.values = g.make({a});
  result.argmax.assign(a, -1);
  for (int col = 0; col < a; ++col) {
    int best = -1;
    double bv = 0.0;
    for (int row = 0; row < k; ++row) {
      if (eligible && !(*eligible)[static_cast<std::size_t>(row) * a + col]) continue;
      const double v = scores->values[static_cast<std::size_t>(row) * a + col];
      if (best < 0 || v > bv) {  // ties keep the lowest row index
        best = row;
        bv = v;
      }
    }
    require(best >= 0, "reduce_max_rows: column " + std::to_string(col) +
                           " has no eligible row");
    result.values->values[col] = bv;
    result.argmax[col] = best;
    g.note_choice(static_cast<std::uint64_t>(best));
  }
  TensorPtr values = result.values;
  std::vector<int> argmax = result.argmax;
  g.record("reduce_max_rows", [scores, values, argmax, a] {
    if (!scores->requires_grad) return;
    scores->ensure_grad();
    for (int col = 0; col < a; ++col) {
      scores->grad[static_cast<std::size_t>(argmax[col]) * a + col] += values->grad[col];
    }
  });
  return result;
}

}  // namespace

RowMax reduce_max_rows(Graph& g, const TensorPtr& scores) {
  return reduce_max_rows_impl(g, scores, nullptr);
}

RowMax reduce_max_rows(Graph& g, const TensorPtr& scores,
                       const std::vector<std::uint8_t>& eligible) {
  return reduce_max_rows_impl(g, scores, &eligible);
}

LossResult softmax_logloss(Graph& g, const TensorPtr& scores, int label) {
  require_rank(scores, 1, "softmax_logloss scores");
  const int a = scores->shape[0];
  require(label >= 0 && label < a,
          "softmax_logloss: label " + std::to_string(label) + " out of range for " +
              shape_str(scores->shape));
  for (double v : scores->values) {
    if (!std::isfinite(v)) throw Error("softmax_logloss: non-finite score");
  }
  const double m = *std::max_element(scores->values.begin(), scores->values.end());
  double z = 0.0;
  std::vector<double> p(a);
  for (int i = 0; i < a; ++i) {
    p[i] = std::exp(scores->values[i] - m);
    z += p[i];
  }
  for (int i = 0; i < a; ++i) p[i] /= z;

  LossResult res;
  res.loss = g.make({1});
  res.loss->values[0] = std::log(z) - (scores->values[label] - m);
  res.probabilities = p;
  TensorPtr loss = res.loss;
  g.record("softmax_logloss", [scores, loss, p, label, a] {
    if (!scores->requires_grad) return;
    scores->ensure_grad();
    const double gl = loss->grad[0];
    for (int i = 0; i < a; ++i) {
      scores->grad[i] += gl * (p[i] - (i == label ? 1.0 : 0.0));
    }
  });
  return res;
}

LossResult sigmoid_cross_entropy(Graph& g, const TensorPtr& scores,
                                 const std::vector<double>& labels) {
  require_rank(scores, 1, "sigmoid_cross_entropy scores");
  const int a = scores->shape[0];
  require(labels.size() == static_cast<std::size_t>(a),
          "sigmoid_cross_entropy: " + std::to_string(labels.size()) + " labels for " +
              shape_str(scores->shape) + " scores");
  for (double y : labels) {
    require(y == 0.0 || y == 1.0, "sigmoid_cross_entropy: labels must be exactly 0 or 1");
  }
  for (double v : scores->values) {
    if (!std::isfinite(v)) throw Error("sigmoid_cross_entropy: non-finite score");
  }

  LossResult res;
  res.loss = g.make({1});
  res.probabilities.resize(a);
  double total = 0.0;
  for (int i = 0; i < a; ++i) {
    const double x = scores->values[i];
    // max(x,0) - x*y + log(1 + exp(-|x|))
    total += std::max(x, 0.0) - x * labels[i] + std::log1p(std::exp(-std::abs(x)));
    res.probabilities[i] = 1.0 / (1.0 + std::exp(-x));
  }
  res.loss->values[0] = total / a;
  TensorPtr loss = res.loss;
  std::vector<double> p = res.probabilities;
  g.record("sigmoid_cross_entropy", [scores, loss, p, labels, a] {
    if (!scores->requires_grad) return;
    scores->ensure_grad();
    const double gl = loss->grad[0] / a;
    for (int i = 0; i < a; ++i) scores->grad[i] += gl * (p[i] - labels[i]);
  });
  return res;
}

TensorPtr sum_scalars(Graph& g, const std::vector<TensorPtr>& scalars) {
  require(!scalars.empty(), "sum_scalars: empty input");
  TensorPtr out = g.make({1});
  double s = 0.0;
  for (const TensorPtr& t : scalars) {
    require(t && t->numel() == 1, "sum_scalars: inputs must be scalars");
    s += t->values[0];
  }
  out->values[0] = s;
  g.record("sum_scalars", [scalars, out] {
    for (const TensorPtr& t : scalars) {
      if (!t->requires_grad) continue;
      t->ensure_grad();
      t->grad[0] += out->grad[0];
    }
  });
  return out;
}

std::vector<double> softmax_values(const std::vector<double>& scores) {
  if (scores.empty()) throw std::invalid_argument("softmax_values: empty scores");
  const double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> sigmoid_values(const std::vector<double>& scores) {
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = 1.0 / (1.0 + std::exp(-scores[i]));
  }
  return p;
}

}  // namespace rstar::ad
