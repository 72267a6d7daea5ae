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

#include "ssc/proxy_codec.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "ssc/nn_ops.h"
#include "ssc/status.h"

namespace ssc {
namespace {

int RoundUp(int v, int m) { return (v + m - 1) / m * m; }

int Reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

// 8x8 product helpers: out = a * b, out = a^T * b, out = a * b^T.
void MatMul(const double* a, const double* b, double* out) {
  for (int i = 0; i < kBlock; ++i)
    for (int j = 0; j < kBlock; ++j) {
      double s = 0.0;
      for (int k = 0; k < kBlock; ++k) s += a[i * kBlock + k] * b[k * kBlock + j];
      out[i * kBlock + j] = s;
    }
}
void MatMulAt(const double* a, const double* b, double* out) {
  for (int i = 0; i < kBlock; ++i)
    for (int j = 0; j < kBlock; ++j) {
      double s = 0.0;
      for (int k = 0; k < kBlock; ++k) s += a[k * kBlock + i] * b[k * kBlock + j];
      out[i * kBlock + j] = s;
    }
}
void MatMulBt(const double* a, const double* b, double* out) {
  for (int i = 0; i < kBlock; ++i)
    for (int j = 0; j < kBlock; ++j) {
      double s = 0.0;
      for (int k = 0; k < kBlock; ++k) s += a[i * kBlock + k] * b[j * kBlock + k];
      out[i * kBlock + j] = s;
    }
}

// D X D^T
void ForwardDct(const std::array<double, kBands>& d, const double* x, double* c) {
  double tmp[kBands];
  MatMul(d.data(), x, tmp);
  MatMulBt(tmp, d.data(), c);
}
// D^T C D
void InverseDct(const std::array<double, kBands>& d, const double* c, double* x) {
  double tmp[kBands];
  MatMulAt(d.data(), c, tmp);
  MatMul(tmp, d.data(), x);
}

void Apply3(const std::array<double, 9>& m, double scale, double* a, double* b,
            double* c) {
  const double x = *a, y = *b, z = *c;
  *a = scale * (m[0] * x + m[1] * y + m[2] * z);
  *b = scale * (m[3] * x + m[4] * y + m[5] * z);
  *c = scale * (m[6] * x + m[7] * y + m[8] * z);
}

std::array<double, 9> Transposed(const std::array<double, 9>& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

size_t CoeffIndex(int n, int c, int block, int band, int blocks) {
  return ((static_cast<size_t>(n) * 3 + c) * blocks + block) * kBands + band;
}

// Standard Laplace density and cdf in normalised units.
double LaplaceG(double z) { return 0.5 * std::exp(-std::abs(z)); }

// P(lower < X < upper) for a standard Laplace, computed without
// cancellation in the tails.
double LaplaceMass(double zl, double zu) {
  if (zl >= 0.0) return 0.5 * (std::exp(-zl) - std::exp(-zu));
  if (zu <= 0.0) return 0.5 * (std::exp(zu) - std::exp(zl));
  return 1.0 - 0.5 * std::exp(zl) - 0.5 * std::exp(-zu);
}

uint64_t Fnv1a(uint64_t h, const void* data, size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Tensor ReflectPadTo(const Tensor& x, int ph, int pw) {
  if (ph == x.h() && pw == x.w()) return x;
  Tensor y({x.n(), x.c(), ph, pw});
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < x.c(); ++c)
      for (int yy = 0; yy < ph; ++yy)
        for (int xx = 0; xx < pw; ++xx)
          y.at(n, c, yy, xx) = x.at(n, c, Reflect(yy, x.h()), Reflect(xx, x.w()));
  return y;
}

Tensor ReflectPadToBackward(const Tensor& dy, int h, int w) {
  if (dy.h() == h && dy.w() == w) return dy;
  Tensor dx({dy.n(), dy.c(), h, w});
  for (int n = 0; n < dy.n(); ++n)
    for (int c = 0; c < dy.c(); ++c)
      for (int yy = 0; yy < dy.h(); ++yy)
        for (int xx = 0; xx < dy.w(); ++xx)
          dx.at(n, c, Reflect(yy, h), Reflect(xx, w)) += dy.at(n, c, yy, xx);
  return dx;
}

ProxyCodec::ProxyCodec() {
  for (int k = 0; k < kBlock; ++k) {
    const double a = k == 0 ? std::sqrt(1.0 / kBlock) : std::sqrt(2.0 / kBlock);
    for (int n = 0; n < kBlock; ++n) {
      dct_[k * kBlock + n] =
          a * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * kBlock));
    }
  }
  // Full-range BT.601 YCbCr; gray pixels have zero chroma.
  rgb_to_ycc_ = {0.299,     0.587,     0.114,      //
                 -0.168736, -0.331264, 0.5,        //
                 0.5,       -0.418688, -0.081312};
  // Exact inverse of the matrix above.
  const auto& m = rgb_to_ycc_;
  const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                     m[1] * (m[3] * m[8] - m[5] * m[6]) +
                     m[2] * (m[3] * m[7] - m[4] * m[6]);
  ycc_to_rgb_ = {(m[4] * m[8] - m[5] * m[7]) / det, (m[2] * m[7] - m[1] * m[8]) / det,
                 (m[1] * m[5] - m[2] * m[4]) / det, (m[5] * m[6] - m[3] * m[8]) / det,
                 (m[0] * m[8] - m[2] * m[6]) / det, (m[2] * m[3] - m[0] * m[5]) / det,
                 (m[3] * m[7] - m[4] * m[6]) / det, (m[1] * m[6] - m[0] * m[7]) / det,
                 (m[0] * m[4] - m[1] * m[3]) / det};
  qmatrix_.fill(kFlatQuantWeight);
}

double ProxyCodec::Step(const CodecProfile& profile) const {
  if (!(profile.quant_step > 0.0) || !std::isfinite(profile.quant_step)) {
    Fail(ErrorCode::kInvalidArgument, "quant_step must be positive");
  }
  return profile.quant_step;
}

std::vector<double> ProxyCodec::Analyze(const Tensor& padded, double step) const {
  const int n_img = padded.n(), ph = padded.h(), pw = padded.w();
  const int bw = pw / kBlock, blocks = (ph / kBlock) * bw;
  std::vector<double> out(static_cast<size_t>(n_img) * 3 * blocks * kBands);
  Tensor ycc = padded;
  for (int n = 0; n < n_img; ++n)
    for (int y = 0; y < ph; ++y)
      for (int x = 0; x < pw; ++x)
        Apply3(rgb_to_ycc_, 255.0, &ycc.at(n, 0, y, x), &ycc.at(n, 1, y, x),
               &ycc.at(n, 2, y, x));
  double blk[kBands], coef[kBands];
  for (int n = 0; n < n_img; ++n)
    for (int c = 0; c < 3; ++c)
      for (int b = 0; b < blocks; ++b) {
        const int by = b / bw * kBlock, bx = b % bw * kBlock;
        for (int i = 0; i < kBlock; ++i)
          for (int j = 0; j < kBlock; ++j) blk[i * kBlock + j] = ycc.at(n, c, by + i, bx + j);
        ForwardDct(dct_, blk, coef);
        double* o = &out[CoeffIndex(n, c, b, 0, blocks)];
        for (int k = 0; k < kBands; ++k) o[k] = coef[k] / (step * qmatrix_[k]);
      }
  return out;
}

Tensor ProxyCodec::Synthesize(const std::vector<double>& symbols, int n_img,
                              int ph, int pw, double step) const {
  const int bw = pw / kBlock, blocks = (ph / kBlock) * bw;
  Tensor out({n_img, 3, ph, pw});
  double coef[kBands], blk[kBands];
  for (int n = 0; n < n_img; ++n)
    for (int c = 0; c < 3; ++c)
      for (int b = 0; b < blocks; ++b) {
        const int by = b / bw * kBlock, bx = b % bw * kBlock;
        const double* s = &symbols[CoeffIndex(n, c, b, 0, blocks)];
        for (int k = 0; k < kBands; ++k) coef[k] = s[k] * step * qmatrix_[k];
        InverseDct(dct_, coef, blk);
        for (int i = 0; i < kBlock; ++i)
          for (int j = 0; j < kBlock; ++j) out.at(n, c, by + i, bx + j) = blk[i * kBlock + j];
      }
  for (int n = 0; n < n_img; ++n)
    for (int y = 0; y < ph; ++y)
      for (int x = 0; x < pw; ++x)
        Apply3(ycc_to_rgb_, 1.0 / 255.0, &out.at(n, 0, y, x), &out.at(n, 1, y, x),
               &out.at(n, 2, y, x));
  return out;
}

// Adjoint of Analyze: maps d(coefficient / step) back to d(pixel).
Tensor ProxyCodec::AnalyzeTranspose(const std::vector<double>& dcoeff, int n_img,
                                    int ph, int pw, double step) const {
  const int bw = pw / kBlock, blocks = (ph / kBlock) * bw;
  Tensor out({n_img, 3, ph, pw});
  double coef[kBands], blk[kBands];
  for (int n = 0; n < n_img; ++n)
    for (int c = 0; c < 3; ++c)
      for (int b = 0; b < blocks; ++b) {
        const int by = b / bw * kBlock, bx = b % bw * kBlock;
        const double* s = &dcoeff[CoeffIndex(n, c, b, 0, blocks)];
        for (int k = 0; k < kBands; ++k) coef[k] = s[k] / (step * qmatrix_[k]);
        InverseDct(dct_, coef, blk);
        for (int i = 0; i < kBlock; ++i)
          for (int j = 0; j < kBlock; ++j) out.at(n, c, by + i, bx + j) = blk[i * kBlock + j];
      }
  const auto mt = Transposed(rgb_to_ycc_);
  for (int n = 0; n < n_img; ++n)
    for (int y = 0; y < ph; ++y)
      for (int x = 0; x < pw; ++x)
        Apply3(mt, 255.0, &out.at(n, 0, y, x), &out.at(n, 1, y, x), &out.at(n, 2, y, x));
  return out;
}

CodecResult ProxyCodec::Code(const ImageRGB& img, const CodecProfile& profile) const {
  return Code(img, profile, CodecMode::kEval);
}

CodecResult ProxyCodec::Code(const ImageRGB& img, const CodecProfile& profile,
                             CodecMode mode, uint64_t noise_seed) const {
  if (mode == CodecMode::kTrain) {
    TrainOutput t = TrainForward(ImageToTensor(img), profile, noise_seed, nullptr);
    CodecResult r{TensorToImage(t.reconstruction), t.rate_bits, 0.0};
    r.bpp = r.bits / static_cast<double>(img.plane_size());
    return r;
  }
  const double step = Step(profile);
  const Tensor x = ImageToTensor(img);
  const int ph = RoundUp(img.height(), kBlock), pw = RoundUp(img.width(), kBlock);
  const Tensor padded = ReflectPadTo(x, ph, pw);
  std::vector<double> sym = Analyze(padded, step);
  for (double& v : sym) v = std::round(v);

  const int blocks = (ph / kBlock) * (pw / kBlock);
  double bits = 0.0;
  std::vector<double> band(static_cast<size_t>(blocks));
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < kBands; ++k) {
      for (int b = 0; b < blocks; ++b) band[b] = sym[CoeffIndex(0, c, b, k, blocks)];
      std::sort(band.begin(), band.end());
      for (size_t i = 0; i < band.size();) {
        size_t j = i;
        while (j < band.size() && band[j] == band[i]) ++j;
        const double p = static_cast<double>(j - i) / blocks;
        bits -= static_cast<double>(j - i) * std::log2(p);
        i = j;
      }
    }
  }
  Tensor recon = CropTopLeft(Synthesize(sym, 1, ph, pw, step), img.height(), img.width());
  CodecResult r{TensorToImage(recon), bits, 0.0};
  r.reconstruction.Clamp();
  r.bpp = bits / static_cast<double>(img.plane_size());
  return r;
}

ProxyCodec::TrainOutput ProxyCodec::TrainForward(const Tensor& x,
                                                 const CodecProfile& profile,
                                                 uint64_t noise_seed,
                                                 TrainCache* cache,
                                                 const std::vector<double>* frozen_offsets) const {
  if (x.rank() != 4 || x.c() != 3) {
    Fail(ErrorCode::kDimension, "codec input must be [N,3,H,W]");
  }
  const double step = Step(profile);
  const int n_img = x.n(), h = x.h(), w = x.w();
  const int ph = RoundUp(h, kBlock), pw = RoundUp(w, kBlock);
  const int blocks = (ph / kBlock) * (pw / kBlock);
  const std::vector<double> y = Analyze(ReflectPadTo(x, ph, pw), step);

  // Distortion path: hard rounding, identity gradient.
  if (frozen_offsets && frozen_offsets->size() != y.size()) {
    Fail(ErrorCode::kDimension, "frozen rounding offsets do not match the input");
  }
  std::vector<double> sym(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    sym[i] = frozen_offsets ? y[i] + (*frozen_offsets)[i] : std::round(y[i]);
  }
  TrainOutput out;
  out.reconstruction = CropTopLeft(Synthesize(sym, n_img, ph, pw, step), h, w);
  for (double& v : out.reconstruction.values()) v = std::clamp(v, 0.0, 1.0);

  // Rate path: additive uniform noise, per-band Laplacian fitted to the batch.
  std::mt19937_64 rng(noise_seed);
  std::vector<double> noisy(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    noisy[i] = y[i] + u;
  }
  std::vector<double> grad(y.size(), 0.0);
  const size_t count = static_cast<size_t>(n_img) * blocks;
  const double inv_count = 1.0 / static_cast<double>(count);
  std::vector<size_t> idx(count);
  double total_bits = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < kBands; ++k) {
      size_t m = 0;
      for (int n = 0; n < n_img; ++n)
        for (int b = 0; b < blocks; ++b) idx[m++] = CoeffIndex(n, c, b, k, blocks);
      double mu = 0.0;
      for (size_t i : idx) mu += noisy[i];
      mu *= inv_count;
      double mad = 0.0, mean_sign = 0.0;
      for (size_t i : idx) {
        const double d = noisy[i] - mu;
        mad += std::abs(d);
        mean_sign += (d > 0) - (d < 0);
      }
      mad *= inv_count;
      mean_sign *= inv_count;
      const bool floored = mad < kMinLaplaceScale;
      const double scale = floored ? kMinLaplaceScale : mad;

      // Per-sample partials; mu and scale gradients are accumulated and
      // distributed afterwards.
      double sum_dmu = 0.0, sum_dscale = 0.0;
      for (size_t i : idx) {
        const double zu = (noisy[i] + 0.5 - mu) / scale;
        const double zl = (noisy[i] - 0.5 - mu) / scale;
        const double p = LaplaceMass(zl, zu);
        if (p < kMinLikelihood) {
          total_bits -= std::log2(kMinLikelihood);
          continue;
        }
        total_bits -= std::log2(p);
        const double dbits_dp = -1.0 / (p * std::numbers::ln2);
        const double gu = LaplaceG(zu), gl = LaplaceG(zl);
        const double dp_dy = (gu - gl) / scale;
        const double dp_dscale = -(gu * zu - gl * zl) / scale;
        grad[i] += dbits_dp * dp_dy;
        sum_dmu -= dbits_dp * dp_dy;
        sum_dscale += dbits_dp * dp_dscale;
      }
      // mu = mean(y); scale = mean|y - mu| (unless floored).
      const double dmu_total = sum_dmu - (floored ? 0.0 : sum_dscale * mean_sign);
      for (size_t i : idx) {
        grad[i] += dmu_total * inv_count;
        if (!floored) {
          const double d = noisy[i] - mu;
          grad[i] += sum_dscale * ((d > 0) - (d < 0)) * inv_count;
        }
      }
    }
  }
  out.rate_bits = total_bits;
  if (cache) {
    cache->n = n_img;
    cache->h = h;
    cache->w = w;
    cache->ph = ph;
    cache->pw = pw;
    cache->step = step;
    cache->rate_grad = std::move(grad);
    cache->round_offsets.resize(y.size());
    for (size_t i = 0; i < y.size(); ++i) cache->round_offsets[i] = sym[i] - y[i];
  }
  return out;
}

Tensor ProxyCodec::TrainBackward(const TrainCache& cache, const Tensor& d_recon,
                                 double d_rate_bits) const {
  RequireShape(d_recon, {cache.n, 3, cache.h, cache.w}, "codec recon gradient");
  const int blocks = (cache.ph / kBlock) * (cache.pw / kBlock);
  // Crop and clamp pass the gradient straight through; pad with zeros.
  Tensor d_pad({cache.n, 3, cache.ph, cache.pw});
  for (int n = 0; n < cache.n; ++n)
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < cache.h; ++y)
        for (int x = 0; x < cache.w; ++x) d_pad.at(n, c, y, x) = d_recon.at(n, c, y, x);
  // Adjoint of Synthesize: colour, then forward DCT, then scale by step.
  const auto mt = Transposed(ycc_to_rgb_);
  for (int n = 0; n < cache.n; ++n)
    for (int y = 0; y < cache.ph; ++y)
      for (int x = 0; x < cache.pw; ++x)
        Apply3(mt, 1.0 / 255.0, &d_pad.at(n, 0, y, x), &d_pad.at(n, 1, y, x),
               &d_pad.at(n, 2, y, x));
  std::vector<double> dsym(static_cast<size_t>(cache.n) * 3 * blocks * kBands);
  const int bw = cache.pw / kBlock;
  double blk[kBands], coef[kBands];
  for (int n = 0; n < cache.n; ++n)
    for (int c = 0; c < 3; ++c)
      for (int b = 0; b < blocks; ++b) {
        const int by = b / bw * kBlock, bx = b % bw * kBlock;
        for (int i = 0; i < kBlock; ++i)
          for (int j = 0; j < kBlock; ++j) blk[i * kBlock + j] = d_pad.at(n, c, by + i, bx + j);
        ForwardDct(dct_, blk, coef);
        double* o = &dsym[CoeffIndex(n, c, b, 0, blocks)];
        for (int k = 0; k < kBands; ++k) {
          o[k] = coef[k] * cache.step * qmatrix_[k] +
                 d_rate_bits * cache.rate_grad[CoeffIndex(n, c, b, k, blocks)];
        }
      }
  Tensor dx = AnalyzeTranspose(dsym, cache.n, cache.ph, cache.pw, cache.step);
  return ReflectPadToBackward(dx, cache.h, cache.w);
}

uint64_t ProxyCodec::StateChecksum() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = Fnv1a(h, dct_.data(), sizeof(dct_));
  h = Fnv1a(h, rgb_to_ycc_.data(), sizeof(rgb_to_ycc_));
  h = Fnv1a(h, ycc_to_rgb_.data(), sizeof(ycc_to_rgb_));
  h = Fnv1a(h, qmatrix_.data(), sizeof(qmatrix_));
  return h;
}

CodecResult ProxyCode(const ImageRGB& img, const CodecProfile& profile,
                      CodecMode mode, uint64_t noise_seed) {
  static const ProxyCodec codec;
  return codec.Code(img, profile, mode, noise_seed);
}

}  // namespace ssc
