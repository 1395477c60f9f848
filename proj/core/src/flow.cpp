// Copyright 2026 The vidstruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidstruct/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vidstruct/error.hpp"
#include "vidstruct/thread_pool.hpp"

namespace vidstruct {

void FlowParams::validate() const {
  if (patch_size < 2) throw PreconditionError("flow patch_size must be >= 2");
  if (patch_stride < 1 || patch_stride > patch_size) {
    throw PreconditionError("flow patch_stride must be in [1, patch_size]");
  }
  if (iterations_per_patch < 1) throw PreconditionError("flow iterations_per_patch must be >= 1");
  if (pyramid_levels < 0) throw PreconditionError("flow pyramid_levels must be >= 0");
  if (!(max_displacement_per_level > 0.0F)) {
    throw PreconditionError("flow max_displacement_per_level must be > 0");
  }
}

MotionField MotionField::uniform(int width, int height, float dx, float dy) {
  MotionField f;
  f.width = width;
  f.height = height;
  f.dx.assign(static_cast<std::size_t>(width) * height, dx);
  f.dy.assign(static_cast<std::size_t>(width) * height, dy);
  return f;
}

namespace {

struct FloatImage {
  int w = 0;
  int h = 0;
  std::vector<float> px;

  float at(int x, int y) const { return px[static_cast<std::size_t>(y) * w + x]; }
  float* row(int y) { return px.data() + static_cast<std::size_t>(y) * w; }
  const float* row(int y) const { return px.data() + static_cast<std::size_t>(y) * w; }

  // Bilinear sample, coordinates clamped to the image.
  float sample(float x, float y) const {
    x = std::clamp(x, 0.0F, static_cast<float>(w - 1));
    y = std::clamp(y, 0.0F, static_cast<float>(h - 1));
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const float fx = x - static_cast<float>(x0);
    const float fy = y - static_cast<float>(y0);
    const float* r0 = row(y0);
    const float* r1 = row(y1);
    const float top = r0[x0] + fx * (r0[x1] - r0[x0]);
    const float bottom = r1[x0] + fx * (r1[x1] - r1[x0]);
    return top + fy * (bottom - top);
  }
};

FloatImage to_float(const LumaPlane& plane) {
  FloatImage im{plane.width(), plane.height(), {}};
  im.px.assign(plane.data().begin(), plane.data().end());
  return im;
}

FloatImage half_size(const FloatImage& src) {
  FloatImage out{src.w / 2, src.h / 2, {}};
  out.px.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    const float* a = src.row(2 * y);
    const float* b = src.row(2 * y + 1);
    float* d = out.row(y);
    for (int x = 0; x < out.w; ++x) {
      d[x] = 0.25F * (a[2 * x] + a[2 * x + 1] + b[2 * x] + b[2 * x + 1]);
    }
  }
  return out;
}

void gradients(const FloatImage& im, FloatImage& gx, FloatImage& gy) {
  gx = FloatImage{im.w, im.h, std::vector<float>(im.px.size())};
  gy = FloatImage{im.w, im.h, std::vector<float>(im.px.size())};
  for (int y = 0; y < im.h; ++y) {
    const float* r = im.row(y);
    const float* up = im.row(std::max(y - 1, 0));
    const float* down = im.row(std::min(y + 1, im.h - 1));
    const float vscale = (y == 0 || y == im.h - 1) ? 1.0F : 0.5F;
    float* ox = gx.row(y);
    float* oy = gy.row(y);
    for (int x = 0; x < im.w; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, im.w - 1);
      const float hscale = (x == 0 || x == im.w - 1) ? 1.0F : 0.5F;
      ox[x] = hscale * (r[xr] - r[xl]);
      oy[x] = vscale * (down[x] - up[x]);
    }
  }
}

struct DenseFlow {
  int w = 0;
  int h = 0;
  std::vector<float> u;
  std::vector<float> v;
};

DenseFlow upsample(const DenseFlow& coarse, int w, int h) {
  DenseFlow out{w, h, std::vector<float>(static_cast<std::size_t>(w) * h),
                std::vector<float>(static_cast<std::size_t>(w) * h)};
  FloatImage cu{coarse.w, coarse.h, coarse.u};
  FloatImage cv{coarse.w, coarse.h, coarse.v};
  for (int y = 0; y < h; ++y) {
    const float sy = (static_cast<float>(y) + 0.5F) * 0.5F - 0.5F;
    for (int x = 0; x < w; ++x) {
      const float sx = (static_cast<float>(x) + 0.5F) * 0.5F - 0.5F;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      out.u[i] = 2.0F * cu.sample(sx, sy);
      out.v[i] = 2.0F * cv.sample(sx, sy);
    }
  }
  return out;
}

// One pyramid level: sparse patch search followed by densification.
class LevelSolver {
 public:
  LevelSolver(const FloatImage& ref, const FloatImage& mov, const FlowParams& params)
      : ref_(ref), mov_(mov), p_(params) {
    gradients(ref_, gx_, gy_);
    ws_ = 1 + (ref_.w - p_.patch_size) / p_.patch_stride;
    hs_ = 1 + (ref_.h - p_.patch_size) / p_.patch_stride;
    su_.assign(static_cast<std::size_t>(ws_) * hs_, 0.0F);
    sv_.assign(su_.size(), 0.0F);
  }

  void solve(DenseFlow& flow, ThreadPool* pool) {
    parallel_for(pool, 0, hs_, [&](int lo, int hi) {
      std::vector<float> scratch(static_cast<std::size_t>(p_.patch_size) * p_.patch_size * 4);
      for (int is = lo; is < hi; ++is) {
        for (int js = 0; js < ws_; ++js) search_patch(is, js, flow, scratch);
      }
    });
    DenseFlow dense{flow.w, flow.h, std::vector<float>(flow.u.size()),
                    std::vector<float>(flow.v.size())};
    parallel_for(pool, 0, ref_.h, [&](int lo, int hi) {
      for (int y = lo; y < hi; ++y) densify_row(y, dense);
    });
    flow = std::move(dense);
  }

 private:
  // Mean-normalized residual energy and gradient projection at displacement (u, v).
  float evaluate(int px, int py, float u, float v, const float* tmpl, const float* tgx,
                 const float* tgy, float& bx, float& by) const {
    const int n = p_.patch_size;
    const float x = static_cast<float>(px) + u;
    const float y = static_cast<float>(py) + v;
    const int xi = static_cast<int>(std::floor(x));
    const int yi = static_cast<int>(std::floor(y));
    const float fx = x - static_cast<float>(xi);
    const float fy = y - static_cast<float>(yi);
    const float w00 = (1.0F - fx) * (1.0F - fy);
    const float w01 = fx * (1.0F - fy);
    const float w10 = (1.0F - fx) * fy;
    const float w11 = fx * fy;
    const bool inside = xi >= 0 && yi >= 0 && xi + n < mov_.w && yi + n < mov_.h;

    float sum_d = 0.0F;
    float sum_dd = 0.0F;
    float sum_gx = 0.0F;
    float sum_gy = 0.0F;
    float sum_gxd = 0.0F;
    float sum_gyd = 0.0F;
    for (int j = 0; j < n; ++j) {
      const float* r0 = inside ? mov_.row(yi + j) + xi : nullptr;
      const float* r1 = inside ? mov_.row(yi + j + 1) + xi : nullptr;
      for (int i = 0; i < n; ++i) {
        float m;
        if (inside) {
          m = w00 * r0[i] + w01 * r0[i + 1] + w10 * r1[i] + w11 * r1[i + 1];
        } else {
          m = mov_.sample(x + static_cast<float>(i), y + static_cast<float>(j));
        }
        const int k = j * n + i;
        const float d = m - tmpl[k];
        sum_d += d;
        sum_dd += d * d;
        sum_gx += tgx[k];
        sum_gy += tgy[k];
        sum_gxd += tgx[k] * d;
        sum_gyd += tgy[k] * d;
      }
    }
    const float inv_n = 1.0F / static_cast<float>(n * n);
    const float mean_d = sum_d * inv_n;
    bx = sum_gxd - mean_d * sum_gx;
    by = sum_gyd - mean_d * sum_gy;
    return sum_dd - sum_d * mean_d;
  }

  void search_patch(int is, int js, const DenseFlow& init, std::vector<float>& scratch) {
    const int n = p_.patch_size;
    const int px = js * p_.patch_stride;
    const int py = is * p_.patch_stride;
    float* tmpl = scratch.data();
    float* tgx = tmpl + n * n;
    float* tgy = tgx + n * n;

    double hxx = 0.0;
    double hxy = 0.0;
    double hyy = 0.0;
    for (int j = 0; j < n; ++j) {
      const float* r = ref_.row(py + j) + px;
      const float* ax = gx_.row(py + j) + px;
      const float* ay = gy_.row(py + j) + px;
      for (int i = 0; i < n; ++i) {
        const int k = j * n + i;
        tmpl[k] = r[i];
        tgx[k] = ax[i];
        tgy[k] = ay[i];
      }
    }
    // Hessian of the mean-normalized template.
    double mgx = 0.0;
    double mgy = 0.0;
    for (int k = 0; k < n * n; ++k) {
      mgx += tgx[k];
      mgy += tgy[k];
    }
    mgx /= n * n;
    mgy /= n * n;
    for (int k = 0; k < n * n; ++k) {
      const double a = tgx[k] - mgx;
      const double b = tgy[k] - mgy;
      hxx += a * a;
      hxy += a * b;
      hyy += b * b;
    }
    const double ridge = 1e-3 * (hxx + hyy) + 1e-2;
    hxx += ridge;
    hyy += ridge;
    const double det = hxx * hyy - hxy * hxy;
    const float i11 = static_cast<float>(hyy / det);
    const float i12 = static_cast<float>(-hxy / det);
    const float i22 = static_cast<float>(hxx / det);

    const std::size_t centre =
        static_cast<std::size_t>(py + n / 2) * init.w + static_cast<std::size_t>(px + n / 2);
    const float u0 = init.u[centre];
    const float v0 = init.v[centre];

    float u = u0;
    float v = v0;
    float best_u = u0;
    float best_v = v0;
    float best_ssd = std::numeric_limits<float>::infinity();
    for (int it = 0; it < p_.iterations_per_patch; ++it) {
      float bx = 0.0F;
      float by = 0.0F;
      const float ssd = evaluate(px, py, u, v, tmpl, tgx, tgy, bx, by);
      if (!(ssd < best_ssd)) break;
      best_ssd = ssd;
      best_u = u;
      best_v = v;
      const float du = i11 * bx + i12 * by;
      const float dv = i12 * bx + i22 * by;
      if (du * du + dv * dv < 1e-4F) break;
      u -= du;
      v -= dv;
    }
    const float ddu = best_u - u0;
    const float ddv = best_v - v0;
    if (ddu * ddu + ddv * ddv > p_.max_displacement_per_level * p_.max_displacement_per_level) {
      best_u = u0;
      best_v = v0;
    }
    const std::size_t s = static_cast<std::size_t>(is) * ws_ + js;
    su_[s] = best_u;
    sv_[s] = best_v;
  }

  // Patches covering coordinate c along an axis with `count` patches.
  void covering(int c, int count, int& first, int& last) const {
    const int n = p_.patch_size;
    const int s = p_.patch_stride;
    last = std::min(c / s, count - 1);
    const int lo = c - n + 1;
    first = lo <= 0 ? 0 : (lo + s - 1) / s;
    if (first > last) first = last;
  }

  void densify_row(int y, DenseFlow& out) const {
    int is0 = 0;
    int is1 = 0;
    covering(y, hs_, is0, is1);
    const float* r = ref_.row(y);
    for (int x = 0; x < ref_.w; ++x) {
      int js0 = 0;
      int js1 = 0;
      covering(x, ws_, js0, js1);
      float su = 0.0F;
      float sv = 0.0F;
      float sw = 0.0F;
      for (int is = is0; is <= is1; ++is) {
        for (int js = js0; js <= js1; ++js) {
          const std::size_t s = static_cast<std::size_t>(is) * ws_ + js;
          const float pu = su_[s];
          const float pv = sv_[s];
          const float diff = mov_.sample(static_cast<float>(x) + pu, static_cast<float>(y) + pv) - r[x];
          const float w = 1.0F / std::max(1.0F, std::abs(diff));
          su += w * pu;
          sv += w * pv;
          sw += w;
        }
      }
      const std::size_t i = static_cast<std::size_t>(y) * out.w + x;
      out.u[i] = su / sw;
      out.v[i] = sv / sw;
    }
  }

  const FloatImage& ref_;
  const FloatImage& mov_;
  const FlowParams& p_;
  FloatImage gx_;
  FloatImage gy_;
  int ws_ = 0;
  int hs_ = 0;
  std::vector<float> su_;
  std::vector<float> sv_;
};

}  // namespace

int flow_levels(int width, int height, const FlowParams& params) {
  int levels = 1;
  int w = width;
  int h = height;
  while (std::max(w / 2, h / 2) >= 32 && std::min(w / 2, h / 2) >= params.patch_size) {
    if (params.pyramid_levels > 0 && levels >= params.pyramid_levels) break;
    w /= 2;
    h /= 2;
    ++levels;
  }
  return levels;
}

float search_radius_total(int width, int height, const FlowParams& params) {
  const int levels = flow_levels(width, height, params);
  return params.max_displacement_per_level * static_cast<float>((1 << levels) - 1);
}

MotionField compute_flow(const LumaPlane& reference, const LumaPlane& moving,
                         const FlowParams& params, ThreadPool* pool) {
  if (reference.width() != moving.width() || reference.height() != moving.height()) {
    throw PreconditionError("compute_flow: plane sizes differ (" +
                            std::to_string(reference.width()) + "x" +
                            std::to_string(reference.height()) + " vs " +
                            std::to_string(moving.width()) + "x" +
                            std::to_string(moving.height()) + ")");
  }
  params.validate();
  if (std::min(reference.width(), reference.height()) < params.patch_size) {
    throw PreconditionError("compute_flow: plane smaller than one patch");
  }

  const int levels = flow_levels(reference.width(), reference.height(), params);
  std::vector<FloatImage> ref_pyr{to_float(reference)};
  std::vector<FloatImage> mov_pyr{to_float(moving)};
  for (int l = 1; l < levels; ++l) {
    ref_pyr.push_back(half_size(ref_pyr.back()));
    mov_pyr.push_back(half_size(mov_pyr.back()));
  }

  const auto& top = ref_pyr.back();
  DenseFlow flow{top.w, top.h, std::vector<float>(top.px.size(), 0.0F),
                 std::vector<float>(top.px.size(), 0.0F)};
  for (int l = levels - 1; l >= 0; --l) {
    if (l != levels - 1) flow = upsample(flow, ref_pyr[l].w, ref_pyr[l].h);
    LevelSolver solver(ref_pyr[l], mov_pyr[l], params);
    solver.solve(flow, pool);
  }

  MotionField field;
  field.width = flow.w;
  field.height = flow.h;
  field.dx = std::move(flow.u);
  field.dy = std::move(flow.v);
  return field;
}

double average_magnitude(const MotionField& field) {
  if (field.dx.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < field.dx.size(); ++i) {
    sum += std::hypot(static_cast<double>(field.dx[i]), static_cast<double>(field.dy[i]));
  }
  return sum / static_cast<double>(field.dx.size());
}

}  // namespace vidstruct
