// Copyright 2026 The SSC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssc/lintrans.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssc/bytes.h"
#include "ssc/status.h"

namespace ssc {
namespace {

constexpr double kDegenerateVariance = 1e-12;
constexpr int kKmeansMaxIterations = 25;

// volatile: gcc 11 -O3 folds the float round-trip away when vectorizing pairs.
double RoundToFloat(double v) {
  volatile float f = static_cast<float>(v);
  return f;
}

Eigen::Matrix3d ToEigen(const Mat3& m) {
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e(i, j) = m[i][j];
  return e;
}

Mat3 FromEigen(const Eigen::Matrix3d& e) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = e(i, j);
  return m;
}

ImageRGB ApplyPixelMatrix(const ImageRGB& img, const Mat3& m) {
  ImageRGB out(img.height(), img.width());
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  for (int c = 0; c < 3; ++c) {
    auto o = out.plane(c);
    for (size_t i = 0; i < img.plane_size(); ++i) {
      o[i] = m[c][0] * r[i] + m[c][1] * g[i] + m[c][2] * b[i];
    }
  }
  out.Clamp();
  return out;
}

// Catmull-Rom kernel, a = -0.5.
double CubicWeight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

// Resamples a 1-D signal of length |n| to length |m| with source position
// (j + 0.5) * divisor - 0.5 and clamp-to-edge.
void Resample1d(const double* in, int n, ptrdiff_t in_stride, double* out,
                int m, ptrdiff_t out_stride, double divisor) {
  for (int j = 0; j < m; ++j) {
    const double src = (j + 0.5) * divisor - 0.5;
    const int base = static_cast<int>(std::floor(src));
    double acc = 0.0;
    for (int k = base - 1; k <= base + 2; ++k) {
      const int idx = std::clamp(k, 0, n - 1);
      acc += CubicWeight(src - k) * in[idx * in_stride];
    }
    out[j * out_stride] = acc;
  }
}

void RequireAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

double PlaneDistortion(const Plane& p, const std::vector<double>& centers,
                       const std::vector<int>& assign) {
  double sum = 0.0;
  for (size_t i = 0; i < p.data.size(); ++i) {
    const double d = p.data[i] - centers[assign[i]];
    sum += d * d;
  }
  return p.data.empty() ? 0.0 : sum / static_cast<double>(p.data.size());
}

// Nearest center; ties resolve to the lower index.
int Nearest(const std::vector<double>& centers, double v) {
  int best = 0;
  double best_d = std::abs(v - centers[0]);
  for (size_t k = 1; k < centers.size(); ++k) {
    const double d = std::abs(v - centers[k]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

}  // namespace

Mat3 Identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

Mat3 Transpose(const Mat3& m) {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
  return t;
}

Mat3 Multiply(const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 Multiply(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r[i] += m[i][k] * v[k];
  return r;
}

const char* TransformKindName(TransformKind kind) {
  switch (kind) {
    case TransformKind::kIdentity: return "identity";
    case TransformKind::kDesaturate: return "desaturate";
    case TransformKind::kPcaDownscale: return "pca_downscale";
    case TransformKind::kPcaQuantize: return "pca_quantize";
  }
  return "unknown";
}

TransformKind ParseTransformKind(const std::string& name) {
  for (auto k : {TransformKind::kIdentity, TransformKind::kDesaturate,
                 TransformKind::kPcaDownscale, TransformKind::kPcaQuantize}) {
    if (name == TransformKindName(k)) return k;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown transform kind: " + name);
}

void TransformSpec::Validate() const {
  switch (kind) {
    case TransformKind::kIdentity:
      return;
    case TransformKind::kDesaturate:
      RequireAlpha(alpha);
      return;
    case TransformKind::kPcaDownscale:
      if (!(d_sc1 >= 1.0 && d_sc2 >= 1.0) || !std::isfinite(d_sc1) ||
          !std::isfinite(d_sc2)) {
        Fail(ErrorCode::kInvalidArgument, "downscale divisors must be >= 1");
      }
      return;
    case TransformKind::kPcaQuantize:
      if (q_sc1 < 1 || q_sc1 > 8 || q_sc2 < 1 || q_sc2 > 8) {
        Fail(ErrorCode::kInvalidArgument, "quantization bits must be in 1..8");
      }
      return;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown transform kind");
}

TransformSpec TransformSpec::Desaturate(double alpha) {
  TransformSpec s;
  s.kind = TransformKind::kDesaturate;
  s.alpha = alpha;
  return s;
}

TransformSpec TransformSpec::PcaDownscale(double d1, double d2) {
  TransformSpec s;
  s.kind = TransformKind::kPcaDownscale;
  s.d_sc1 = d1;
  s.d_sc2 = d2;
  return s;
}

TransformSpec TransformSpec::PcaQuantize(int q1, int q2) {
  TransformSpec s;
  s.kind = TransformKind::kPcaQuantize;
  s.q_sc1 = q1;
  s.q_sc2 = q2;
  return s;
}

Mat3 InterpolateToGrayMatrix(double coefficient) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = (1.0 - coefficient) * kLumaWeights[j] + (i == j ? coefficient : 0.0);
    }
  }
  return m;
}

ImageRGB Desaturate(const ImageRGB& img, double alpha) {
  RequireAlpha(alpha);
  if (alpha == 1.0) return img;
  return ApplyPixelMatrix(img, InterpolateToGrayMatrix(alpha));
}

ImageRGB Resaturate(const ImageRGB& img, double alpha) {
  RequireAlpha(alpha);
  if (alpha == 1.0) return img;
  return ApplyPixelMatrix(img, InterpolateToGrayMatrix(1.0 / alpha));
}

PcaBasis PcaFit(const ImageRGB& img) {
  PcaBasis out;
  const double n = static_cast<double>(img.plane_size());
  for (int c = 0; c < 3; ++c) {
    const auto p = img.plane(c);
    out.mean[c] = std::accumulate(p.begin(), p.end(), 0.0) / n;
  }
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < img.plane_size(); ++i) {
    Eigen::Vector3d d(img.plane(0)[i] - out.mean[0],
                      img.plane(1)[i] - out.mean[1],
                      img.plane(2)[i] - out.mean[2]);
    cov += d * d.transpose();
  }
  cov /= n;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d values = eig.eigenvalues();  // ascending
  if (!(values(2) >= kDegenerateVariance)) {
    out.basis = Identity3();
    return out;
  }
  for (int row = 0; row < 3; ++row) {
    Eigen::Vector3d v = eig.eigenvectors().col(2 - row);
    int arg = 0;
    for (int k = 1; k < 3; ++k) {
      if (std::abs(v(k)) > std::abs(v(arg))) arg = k;
    }
    if (v(arg) < 0) v = -v;
    for (int k = 0; k < 3; ++k) out.basis[row][k] = v(k);
  }
  return out;
}

std::array<Plane, 3> PcaForward(const PcaBasis& basis, const ImageRGB& img) {
  std::array<Plane, 3> planes;
  for (auto& p : planes) p = Plane(img.height(), img.width());
  for (size_t i = 0; i < img.plane_size(); ++i) {
    const Vec3 d{img.plane(0)[i] - basis.mean[0], img.plane(1)[i] - basis.mean[1],
                 img.plane(2)[i] - basis.mean[2]};
    const Vec3 y = Multiply(basis.basis, d);
    for (int c = 0; c < 3; ++c) planes[c].data[i] = y[c];
  }
  return planes;
}

ImageRGB PcaInverse(const PcaBasis& basis, const std::array<Plane, 3>& planes) {
  const int h = planes[0].height, w = planes[0].width;
  for (const auto& p : planes) {
    if (p.height != h || p.width != w) {
      Fail(ErrorCode::kDimension, "pca inverse: plane dims differ");
    }
  }
  ImageRGB out(h, w);
  const Mat3 bt = Transpose(basis.basis);
  for (size_t i = 0; i < out.plane_size(); ++i) {
    const Vec3 x = Multiply(bt, Vec3{planes[0].data[i], planes[1].data[i],
                                 planes[2].data[i]});
    for (int c = 0; c < 3; ++c) out.plane(c)[i] = x[c] + basis.mean[c];
  }
  out.Clamp();
  return out;
}

Plane DownscaleBicubic(const Plane& plane, double divisor) {
  if (!(divisor >= 1.0) || !std::isfinite(divisor)) {
    Fail(ErrorCode::kInvalidArgument, "divisor must be >= 1");
  }
  const int oh = static_cast<int>(std::ceil(plane.height / divisor));
  const int ow = static_cast<int>(std::ceil(plane.width / divisor));
  if (oh < 1 || ow < 1) Fail(ErrorCode::kDimension, "downscale to empty plane");
  if (divisor == 1.0) return plane;
  Plane tmp(plane.height, ow);
  for (int y = 0; y < plane.height; ++y) {
    Resample1d(&plane.data[static_cast<size_t>(y) * plane.width], plane.width, 1,
               &tmp.data[static_cast<size_t>(y) * ow], ow, 1, divisor);
  }
  Plane out(oh, ow);
  for (int x = 0; x < ow; ++x) {
    Resample1d(&tmp.data[x], plane.height, ow, &out.data[x], oh, ow, divisor);
  }
  return out;
}

Plane UpscaleNearest(const Plane& plane, int target_h, int target_w) {
  if (target_h < plane.height || target_w < plane.width) {
    Fail(ErrorCode::kDimension, "nearest upscale target smaller than source");
  }
  Plane out(target_h, target_w);
  for (int y = 0; y < target_h; ++y) {
    const int sy = std::min(plane.height - 1,
                            static_cast<int>((y + 0.5) * plane.height / target_h));
    for (int x = 0; x < target_w; ++x) {
      const int sx = std::min(plane.width - 1,
                              static_cast<int>((x + 0.5) * plane.width / target_w));
      out.at(y, x) = plane.at(sy, sx);
    }
  }
  return out;
}

KmeansResult KmeansQuantize(const Plane& plane, int q_bits) {
  if (q_bits < 1 || q_bits > 8) {
    Fail(ErrorCode::kInvalidArgument, "q_bits must be in 1..8");
  }
  const size_t k = size_t{1} << q_bits;
  const size_t n = plane.data.size();
  std::vector<double> sorted = plane.data;
  std::sort(sorted.begin(), sorted.end());

  KmeansResult res;
  std::vector<double> centers(k);
  std::vector<int> assign(n, 0);

  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= k) {
    // Every value gets its own center; surplus centers repeat the last one.
    for (size_t j = 0; j < k; ++j) {
      centers[j] = distinct.empty() ? 0.0 : distinct[std::min(j, distinct.size() - 1)];
    }
    for (size_t i = 0; i < n; ++i) assign[i] = Nearest(centers, plane.data[i]);
    res.distortion_trace.push_back(PlaneDistortion(plane, centers, assign));
  } else {
    for (size_t j = 0; j < k; ++j) {
      centers[j] = sorted[std::min(n - 1, static_cast<size_t>((j + 0.5) * n / k))];
    }
    for (size_t i = 0; i < n; ++i) assign[i] = Nearest(centers, plane.data[i]);
    res.distortion_trace.push_back(PlaneDistortion(plane, centers, assign));

    for (int iter = 0; iter < kKmeansMaxIterations; ++iter) {
      std::vector<double> sum(k, 0.0);
      std::vector<size_t> count(k, 0);
      for (size_t i = 0; i < n; ++i) {
        sum[assign[i]] += plane.data[i];
        ++count[assign[i]];
      }
      std::vector<size_t> empty;
      for (size_t j = 0; j < k; ++j) {
        if (count[j] > 0) {
          centers[j] = sum[j] / static_cast<double>(count[j]);
        } else {
          empty.push_back(j);
        }
      }
      if (!empty.empty()) {
        // Reseed each empty cluster with the sample farthest from its center.
        std::vector<size_t> order(n);
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
          return std::abs(plane.data[a] - centers[assign[a]]) >
                 std::abs(plane.data[b] - centers[assign[b]]);
        });
        size_t next = 0;
        std::vector<double> used;
        for (size_t j : empty) {
          while (next < n && std::find(used.begin(), used.end(),
                                       plane.data[order[next]]) != used.end()) {
            ++next;
          }
          if (next >= n) break;
          centers[j] = plane.data[order[next]];
          used.push_back(centers[j]);
          ++next;
        }
      }
      bool changed = false;
      for (size_t i = 0; i < n; ++i) {
        const int a = Nearest(centers, plane.data[i]);
        changed |= a != assign[i];
        assign[i] = a;
      }
      res.distortion_trace.push_back(PlaneDistortion(plane, centers, assign));
      if (!changed && empty.empty()) break;
    }
  }
  res.plane = Plane(plane.height, plane.width);
  for (size_t i = 0; i < n; ++i) res.plane.data[i] = centers[assign[i]];
  res.codebook = std::move(centers);
  return res;
}

Mat3 Pinv3(const Mat3& m) {
  const Eigen::Matrix3d a = ToEigen(m);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  const double cutoff = 1e-10 * s(0);
  Eigen::Matrix3d sinv = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    if (s(i) > cutoff && s(i) > 0.0) sinv(i, i) = 1.0 / s(i);
  }
  return FromEigen(svd.matrixV() * sinv * svd.matrixU().transpose());
}

uint16_t AlphaToFixed(double alpha) {
  RequireAlpha(alpha);
  return static_cast<uint16_t>(std::floor(alpha * kAlphaFixedPointScale));
}

double AlphaFromFixed(uint16_t v) {
  const double a = v / kAlphaFixedPointScale;
  RequireAlpha(a);
  return a;
}

ForwardResult ApplyForward(const TransformSpec& spec, const ImageRGB& img) {
  spec.Validate();
  ForwardResult res{img, SideInfo{}};
  SideInfo& info = res.info;
  info.kind = spec.kind;
  switch (spec.kind) {
    case TransformKind::kIdentity:
      return res;
    case TransformKind::kDesaturate:
      // Work with the alpha the decoder will see.
      info.alpha = AlphaFromFixed(AlphaToFixed(spec.alpha));
      res.image = Desaturate(img, info.alpha);
      return res;
    case TransformKind::kPcaDownscale:
    case TransformKind::kPcaQuantize:
      break;
  }
  // PCA parameters travel as 32-bit floats; use exactly those values.
  info.pca = PcaFit(img);
  for (auto& v : info.pca.mean) v = RoundToFloat(v);
  for (auto& row : info.pca.basis)
    for (auto& v : row) v = RoundToFloat(v);
  auto planes = PcaForward(info.pca, img);
  if (spec.kind == TransformKind::kPcaDownscale) {
    info.divisors = {RoundToFloat(spec.d_sc1), RoundToFloat(spec.d_sc2)};
    for (int s = 0; s < 2; ++s) {
      Plane& p = planes[1 + s];
      p = UpscaleNearest(DownscaleBicubic(p, info.divisors[s]), p.height, p.width);
    }
  } else {
    info.q_bits = {spec.q_sc1, spec.q_sc2};
    for (int s = 0; s < 2; ++s) {
      Plane& p = planes[1 + s];
      KmeansResult q = KmeansQuantize(p, info.q_bits[s]);
      for (auto& v : q.codebook) v = RoundToFloat(v);
      for (auto& v : p.data) v = q.codebook[Nearest(q.codebook, v)];
      info.codebooks[s] = std::move(q.codebook);
    }
  }
  res.image = PcaInverse(info.pca, planes);
  return res;
}

ImageRGB ApplyInverse(const SideInfo& info, const ImageRGB& img) {
  switch (info.kind) {
    case TransformKind::kIdentity:
      return img;
    case TransformKind::kDesaturate:
      return Resaturate(img, info.alpha);
    case TransformKind::kPcaDownscale:
    case TransformKind::kPcaQuantize:
      // The forward op already returned to RGB; the lost detail cannot be
      // recovered from side info.
      return img;
  }
  Fail(ErrorCode::kFormat, "malformed side info: unknown kind");
}

std::vector<uint8_t> EncodeSideInfoPayload(const SideInfo& info) {
  ByteWriter w;
  switch (info.kind) {
    case TransformKind::kIdentity:
      break;
    case TransformKind::kDesaturate:
      w.U16(AlphaToFixed(info.alpha));
      break;
    case TransformKind::kPcaDownscale:
    case TransformKind::kPcaQuantize:
      for (double v : info.pca.mean) w.F32(static_cast<float>(v));
      for (const auto& row : info.pca.basis)
        for (double v : row) w.F32(static_cast<float>(v));
      if (info.kind == TransformKind::kPcaDownscale) {
        for (double d : info.divisors) w.F32(static_cast<float>(d));
      } else {
        for (int s = 0; s < 2; ++s) {
          if (info.q_bits[s] < 1 || info.q_bits[s] > 8 ||
              info.codebooks[s].size() != (size_t{1} << info.q_bits[s])) {
            Fail(ErrorCode::kInvalidArgument, "codebook size does not match q_bits");
          }
          w.U8(static_cast<uint8_t>(info.q_bits[s]));
          for (double v : info.codebooks[s]) w.F32(static_cast<float>(v));
        }
      }
      break;
  }
  return w.Take();
}

SideInfo DecodeSideInfoPayload(TransformKind kind,
                               std::span<const uint8_t> bytes,
                               size_t* consumed) {
  ByteReader r(bytes);
  SideInfo info;
  info.kind = kind;
  switch (kind) {
    case TransformKind::kIdentity:
      break;
    case TransformKind::kDesaturate: {
      const uint16_t fixed = r.U16();
      if (fixed == 0 || fixed > kAlphaFixedPointScale) {
        Fail(ErrorCode::kFormat, "alpha payload out of range");
      }
      info.alpha = AlphaFromFixed(fixed);
      break;
    }
    case TransformKind::kPcaDownscale:
    case TransformKind::kPcaQuantize:
      for (double& v : info.pca.mean) v = r.F32();
      for (auto& row : info.pca.basis)
        for (double& v : row) v = r.F32();
      if (kind == TransformKind::kPcaDownscale) {
        for (double& d : info.divisors) {
          d = r.F32();
          if (!(d >= 1.0) || !std::isfinite(d)) {
            Fail(ErrorCode::kFormat, "divisor payload out of range");
          }
        }
      } else {
        for (int s = 0; s < 2; ++s) {
          const int q = r.U8();
          if (q < 1 || q > 8) Fail(ErrorCode::kFormat, "q_bits payload out of range");
          info.q_bits[s] = q;
          info.codebooks[s].resize(size_t{1} << q);
          for (double& v : info.codebooks[s]) v = r.F32();
        }
      }
      break;
    default:
      Fail(ErrorCode::kFormat, "unknown transform kind in side info");
  }
  if (consumed) *consumed = r.pos();
  return info;
}

}  // namespace ssc
