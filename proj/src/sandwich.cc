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

#include "ssc/sandwich.h"

#include <algorithm>

#include "ssc/bytes.h"
#include "ssc/external_codec.h"
#include "ssc/status.h"

namespace ssc {
namespace {

void ClampTensor(Tensor* t) {
  for (double& v : t->values()) v = std::clamp(v, 0.0, 1.0);
}

// y = M x per pixel.
Tensor ApplyColorMatrix(const Mat3& m, const Tensor& x) {
  Tensor y = Tensor::Like(x);
  for (int n = 0; n < x.n(); ++n)
    for (int yy = 0; yy < x.h(); ++yy)
      for (int xx = 0; xx < x.w(); ++xx) {
        const Vec3 v{x.at(n, 0, yy, xx), x.at(n, 1, yy, xx), x.at(n, 2, yy, xx)};
        const Vec3 r = Multiply(m, v);
        for (int c = 0; c < 3; ++c) y.at(n, c, yy, xx) = r[c];
      }
  return y;
}

ImageRGB ApplyForwardTo(const SandwichConfig& cfg, const ImageRGB& img,
                        SideInfo* info) {
  ForwardResult f = ApplyForward(cfg.transform, img);
  *info = f.info;
  return std::move(f.image);
}

void CheckNets(const SandwichConfig& cfg, const FilterNet* cr, const FilterNet* rs) {
  if (cfg.use_cr != (cr != nullptr)) {
    Fail(ErrorCode::kInvalidArgument, "CR network must be given iff CR is enabled");
  }
  if (cfg.use_rs != (rs != nullptr)) {
    Fail(ErrorCode::kInvalidArgument, "RS network must be given iff RS is enabled");
  }
}

}  // namespace

uint8_t SandwichConfig::Flags() const {
  uint8_t f = 0;
  if (transform.kind != TransformKind::kIdentity) f |= kFlagTransform;
  if (use_cr) f |= kFlagCr;
  if (use_rs) f |= kFlagRs;
  return f;
}

ImageRGB ApplyFilter(const FilterNet& net, const ImageRGB& img) {
  Tensor out = net.Forward(ImageToTensor(img));
  ClampTensor(&out);
  return TensorToImage(out);
}

EncodeResult SandwichEncode(const ImageRGB& img, const SandwichConfig& cfg,
                            const FilterNet* cr) {
  cfg.transform.Validate();
  if (cfg.use_cr != (cr != nullptr)) {
    Fail(ErrorCode::kInvalidArgument, "CR network must be given iff CR is enabled");
  }
  EncodeResult res;
  SideInfo info;
  if (cfg.order == ModuleOrder::kTransformThenCr) {
    res.codec_input = ApplyForwardTo(cfg, img, &info);
    if (cr) res.codec_input = ApplyFilter(*cr, res.codec_input);
  } else {
    res.codec_input = cr ? ApplyFilter(*cr, img) : img;
    res.codec_input = ApplyForwardTo(cfg, res.codec_input, &info);
  }
  res.header.flags = cfg.Flags();
  res.header.side_info = info;
  return res;
}

ImageRGB SandwichDecode(const ImageRGB& codec_output, const SandwichHeader& header,
                        const FilterNet* rs) {
  if (header.rs_on() != (rs != nullptr)) {
    Fail(ErrorCode::kInvalidArgument, "RS network must be given iff the header enables RS");
  }
  ImageRGB out = header.transform_on() ? ApplyInverse(header.side_info, codec_output)
                                       : codec_output;
  if (rs) out = ApplyFilter(*rs, out);
  return out;
}

CodecResult RunCodec(const ImageRGB& img, const SandwichConfig& cfg,
                     const CodecProfile& profile) {
  if (!cfg.external_codec.empty()) {
    return ExternalCode(img, cfg.external_codec, profile.quality);
  }
  return ProxyCode(img, profile, CodecMode::kEval);
}

SandwichConfig EffectiveConfig(const SandwichConfig& cfg, const FilterNet* cr,
                               const FilterNet* rs) {
  SandwichConfig eff = cfg;
  if (cr && cr->IsIdentity()) eff.use_cr = false;
  if (rs && rs->IsIdentity()) eff.use_rs = false;
  if (eff.transform.kind == TransformKind::kDesaturate &&
      AlphaToFixed(eff.transform.alpha) == AlphaToFixed(1.0)) {
    eff.transform = TransformSpec::Identity();
  }
  return eff;
}

PipelineResult RunPipeline(const ImageRGB& img, const SandwichConfig& cfg,
                           const FilterNet* cr, const FilterNet* rs,
                           const CodecProfile& profile) {
  CheckNets(cfg, cr, rs);
  const SandwichConfig eff = EffectiveConfig(cfg, cr, rs);
  EncodeResult enc = SandwichEncode(img, eff, eff.use_cr ? cr : nullptr);
  CodecResult coded = RunCodec(enc.codec_input, eff, profile);
  PipelineResult res;
  res.reconstruction = SandwichDecode(coded.reconstruction, enc.header,
                                      eff.use_rs ? rs : nullptr);
  res.codec_bits = coded.bits;
  res.header = enc.header;
  if (enc.header.flags != 0) {
    res.header_bits = 8.0 * static_cast<double>(SerializeHeader(enc.header).size());
  }
  res.bpp = (res.codec_bits + res.header_bits) / static_cast<double>(img.plane_size());
  return res;
}

TrainPassResult E2eTrainPass(const Tensor& batch, const SandwichConfig& cfg,
                             const FilterNet* cr, const FilterNet* rs,
                             const ProxyCodec& codec, const CodecProfile& profile,
                             uint64_t noise_seed, PassGradients* grads,
                             const std::vector<double>* frozen_offsets) {
  if (!cfg.external_codec.empty()) {
    Fail(ErrorCode::kUnsupported, "external codecs cannot be used for training");
  }
  CheckNets(cfg, cr, rs);
  cfg.transform.Validate();
  if (batch.rank() != 4 || batch.c() != 3) {
    Fail(ErrorCode::kDimension, "training batch must be [N,3,H,W]");
  }
  const int n_img = batch.n();
  const TransformKind kind = cfg.transform.kind;
  const bool desat = kind == TransformKind::kDesaturate;
  const double alpha = AlphaFromFixed(AlphaToFixed(cfg.transform.alpha));
  const Mat3 m_fwd = InterpolateToGrayMatrix(alpha);
  const Mat3 m_inv = InterpolateToGrayMatrix(1.0 / alpha);

  // The linear transform has no parameters; for PCA kinds its gradient is
  // taken as the identity.
  auto transform = [&](const Tensor& x) {
    if (kind == TransformKind::kIdentity) return x;
    if (desat) return ApplyColorMatrix(m_fwd, x);
    Tensor y = Tensor::Like(x);
    for (int n = 0; n < n_img; ++n) {
      const ImageRGB t = ApplyForward(cfg.transform, TensorToImage(x, n)).image;
      const Tensor tt = ImageToTensor(t);
      std::copy(tt.values().begin(), tt.values().end(),
                y.values().begin() + static_cast<ptrdiff_t>(n * tt.size()));
    }
    return y;
  };
  auto transform_back = [&](const Tensor& dy) {
    return desat ? ApplyColorMatrix(Transpose(m_fwd), dy) : dy;
  };

  FilterNet::Cache cr_cache, rs_cache;
  Tensor x = batch;
  if (cfg.order == ModuleOrder::kTransformThenCr) {
    x = transform(x);
    if (cr) x = cr->Forward(x, &cr_cache);
  } else {
    if (cr) {
      x = cr->Forward(x, &cr_cache);
      ClampTensor(&x);
    }
    x = transform(x);
  }
  ClampTensor(&x);  // straight-through in the backward pass

  ProxyCodec::TrainCache codec_cache;
  ProxyCodec::TrainOutput coded =
      codec.TrainForward(x, profile, noise_seed, &codec_cache, frozen_offsets);
  Tensor y = std::move(coded.reconstruction);
  if (desat) {
    y = ApplyColorMatrix(m_inv, y);
    ClampTensor(&y);
  }
  if (rs) {
    y = rs->Forward(y, &rs_cache);
    ClampTensor(&y);
  }

  TrainPassResult res;
  const double pixels = static_cast<double>(n_img) * batch.h() * batch.w();
  res.rate_bits = coded.rate_bits;
  res.rate_bpp = coded.rate_bits / pixels;
  double sq = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double d = 255.0 * (y[i] - batch[i]);
    sq += d * d;
  }
  res.mse = sq / static_cast<double>(y.size());
  res.loss = res.rate_bpp + profile.lambda * res.mse;

  if (grads) {
    // d loss / d y = lambda * 2 * 255^2 (y - x) / count.
    Tensor dy = Tensor::Like(y);
    const double k = profile.lambda * 2.0 * 255.0 * 255.0 / static_cast<double>(y.size());
    for (size_t i = 0; i < y.size(); ++i) dy[i] = k * (y[i] - batch[i]);
    if (rs) {
      if (grads->rs.empty()) grads->rs = rs->ZeroGrads();
      dy = rs->Backward(rs_cache, dy, &grads->rs);
    }
    if (desat) dy = ApplyColorMatrix(Transpose(m_inv), dy);
    Tensor dx = codec.TrainBackward(codec_cache, dy, 1.0 / pixels);
    if (cr) {
      if (grads->cr.empty()) grads->cr = cr->ZeroGrads();
      if (cfg.order == ModuleOrder::kTransformThenCr) {
        cr->Backward(cr_cache, dx, &grads->cr);
      } else {
        cr->Backward(cr_cache, transform_back(dx), &grads->cr);
      }
    }
  }
  res.reconstruction = std::move(y);
  res.round_offsets = std::move(codec_cache.round_offsets);
  return res;
}

namespace {
constexpr uint8_t kPayloadMagic[4] = {'S', 'S', 'C', 'P'};
}  // namespace

std::vector<uint8_t> WriteContainer(const SandwichHeader& header,
                                    const PayloadDescriptor& payload) {
  ByteWriter w;
  if (header.flags != 0) w.Bytes(SerializeHeader(header));
  w.Bytes(kPayloadMagic);
  w.U8(payload.codec);
  w.U8(payload.quality);
  w.U64(payload.codec_bits);
  w.U32(payload.height);
  w.U32(payload.width);
  return w.Take();
}

void ReadContainer(std::span<const uint8_t> bytes, SandwichHeader* header,
                   PayloadDescriptor* payload) {
  size_t pos = 0;
  *header = SandwichHeader{};
  if (bytes.size() >= 4 && bytes[0] == 'S' && bytes[1] == 'S' && bytes[2] == 'C' &&
      bytes[3] == '1') {
    *header = ParseHeader(bytes, &pos);
  }
  ByteReader r(bytes.subspan(pos));
  for (uint8_t m : kPayloadMagic) {
    if (r.U8() != m) Fail(ErrorCode::kFormat, "container: bad payload magic");
  }
  payload->codec = r.U8();
  payload->quality = r.U8();
  payload->codec_bits = r.U64();
  payload->height = r.U32();
  payload->width = r.U32();
  if (r.remaining() != 0) Fail(ErrorCode::kFormat, "container: trailing bytes");
}

}  // namespace ssc
