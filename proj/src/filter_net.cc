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

#include "ssc/filter_net.h"

#include <cmath>
#include <random>

#include "ssc/bytes.h"
#include "ssc/image.h"
#include "ssc/nn_ops.h"
#include "ssc/status.h"

namespace ssc {
namespace {

constexpr char kCheckpointMagic[4] = {'S', 'N', 'N', '1'};
constexpr int kOutChannels = 12;  // 3 colours x r^2 for the shuffle
constexpr double kHeadInitScale = 0.1;

ConvParams MakeConv(int cout, int cin, int k) {
  return {Tensor({cout, cin, k, k}), Tensor({cout})};
}

void FillUniform(Tensor* t, double bound, std::mt19937_64* rng) {
  for (double& v : t->values()) {
    const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
    v = static_cast<double>(static_cast<float>((2.0 * u - 1.0) * bound));
  }
}

void InitConv(ConvParams* p, int fan_in, double scale, std::mt19937_64* rng) {
  FillUniform(&p->w, scale / std::sqrt(static_cast<double>(fan_in)), rng);
  p->b.Fill(0.0);
}

}  // namespace

MbConvParams MakeMbConv(int channels, bool unsqueezed) {
  const int wide = kExpansion * channels;
  MbConvParams p;
  p.expand = MakeConv(wide, channels, 1);
  p.depthwise = MakeConv(wide, 1, 3);
  if (!unsqueezed) p.project = MakeConv(channels, wide, 1);
  p.unsqueezed = unsqueezed;
  return p;
}

Tensor MbConvForward(const Tensor& x, const MbConvParams& p,
                     MbConvCache* cache) {
  Tensor e_pre = Conv2d(x, p.expand.w, p.expand.b, 1);
  Tensor e_act = Silu(e_pre);
  Tensor d_pre = DepthwiseConv2d(e_act, p.depthwise.w, p.depthwise.b, 1);
  Tensor d_act = Silu(d_pre);
  Tensor out;
  if (p.unsqueezed) {
    out = d_act;
  } else {
    out = Conv2d(d_act, p.project.w, p.project.b, 1);
    out.AddScaled(x);
  }
  if (cache) {
    cache->x = x;
    cache->expand_pre = std::move(e_pre);
    cache->expand_act = std::move(e_act);
    cache->dw_pre = std::move(d_pre);
    cache->dw_act = std::move(d_act);
  }
  return out;
}

Tensor MbConvBackward(const MbConvCache& cache, const MbConvParams& p,
                      const Tensor& dy, MbConvParams* grads) {
  Tensor d_act_grad;
  if (p.unsqueezed) {
    d_act_grad = dy;
  } else {
    ConvGrads pg = Conv2dBackward(cache.dw_act, p.project.w, dy, 1);
    grads->project.w.AddScaled(pg.dw);
    grads->project.b.AddScaled(pg.db);
    d_act_grad = std::move(pg.dx);
  }
  Tensor d_pre_grad = SiluBackward(cache.dw_pre, d_act_grad);
  ConvGrads dg = DepthwiseConv2dBackward(cache.expand_act, p.depthwise.w,
                                         d_pre_grad, 1);
  grads->depthwise.w.AddScaled(dg.dw);
  grads->depthwise.b.AddScaled(dg.db);
  Tensor e_pre_grad = SiluBackward(cache.expand_pre, dg.dx);
  ConvGrads eg = Conv2dBackward(cache.x, p.expand.w, e_pre_grad, 1);
  grads->expand.w.AddScaled(eg.dw);
  grads->expand.b.AddScaled(eg.db);
  Tensor dx = std::move(eg.dx);
  if (!p.unsqueezed) dx.AddScaled(dy);
  return dx;
}

FilterNet::FilterNet(int depth, int width) : depth_(depth), width_(width) {
  if (depth < 1 || width < 1) {
    Fail(ErrorCode::kInvalidArgument, "filter net needs L >= 1 and C >= 1");
  }
  stem_ = MakeConv(width, 3, 3);
  for (int i = 0; i < depth; ++i) {
    blocks_.push_back(MakeMbConv(width, i == depth - 1));
  }
  head_ = MakeConv(kOutChannels, kExpansion * width, 3);
}

void FilterNet::Initialize(uint64_t seed) {
  std::mt19937_64 rng(seed);
  InitConv(&stem_, 3 * 9, 1.0, &rng);
  for (auto& b : blocks_) {
    InitConv(&b.expand, width_, 1.0, &rng);
    InitConv(&b.depthwise, 9, 1.0, &rng);
    if (!b.unsqueezed) InitConv(&b.project, kExpansion * width_, 1.0, &rng);
  }
  InitConv(&head_, kExpansion * width_ * 9, kHeadInitScale, &rng);
}

void FilterNet::ZeroBody() {
  for (Tensor* t : Parameters()) t->Fill(0.0);
}

bool FilterNet::IsIdentity() const {
  for (const Tensor* t : {&head_.w, &head_.b})
    for (double v : t->values())
      if (v != 0.0) return false;
  return true;
}

std::vector<Tensor*> FilterNet::Parameters() {
  std::vector<Tensor*> out{&stem_.w, &stem_.b};
  for (auto& b : blocks_) {
    out.insert(out.end(), {&b.expand.w, &b.expand.b, &b.depthwise.w,
                           &b.depthwise.b});
    if (!b.unsqueezed) out.insert(out.end(), {&b.project.w, &b.project.b});
  }
  out.insert(out.end(), {&head_.w, &head_.b});
  return out;
}

std::vector<const Tensor*> FilterNet::Parameters() const {
  std::vector<const Tensor*> out;
  for (Tensor* t : const_cast<FilterNet*>(this)->Parameters()) out.push_back(t);
  return out;
}

std::vector<std::string> FilterNet::ParameterNames() const {
  std::vector<std::string> names{"stem.w", "stem.b"};
  for (size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "block" + std::to_string(i) + ".";
    for (const char* s : {"expand.w", "expand.b", "dw.w", "dw.b"}) names.push_back(p + s);
    if (!blocks_[i].unsqueezed) {
      names.push_back(p + "project.w");
      names.push_back(p + "project.b");
    }
  }
  names.push_back("head.w");
  names.push_back("head.b");
  return names;
}

std::vector<Tensor> FilterNet::ZeroGrads() const {
  std::vector<Tensor> g;
  for (const Tensor* t : Parameters()) g.push_back(Tensor::Like(*t));
  return g;
}

Tensor FilterNet::Forward(const Tensor& x, Cache* cache) const {
  if (x.rank() != 4 || x.c() != 3) {
    Fail(ErrorCode::kDimension, "filter input must be [N,3,H,W], got " +
                                    x.ShapeString());
  }
  Tensor padded = ReflectPadToEven(x);
  Tensor h = Conv2d(padded, stem_.w, stem_.b, 2);
  if (cache) {
    cache->in_h = x.h();
    cache->in_w = x.w();
    cache->stem_out = h;
    cache->blocks.assign(blocks_.size(), {});
  }
  for (size_t i = 0; i < blocks_.size(); ++i) {
    h = MbConvForward(h, blocks_[i], cache ? &cache->blocks[i] : nullptr);
  }
  Tensor body = PixelShuffle(Conv2d(h, head_.w, head_.b, 1), 2);
  if (cache) {
    cache->head_in = std::move(h);
    cache->padded = std::move(padded);
  }
  Tensor out = CropTopLeft(body, x.h(), x.w());
  out.AddScaled(x);
  return out;
}

Tensor FilterNet::Backward(const Cache& cache, const Tensor& dy,
                           std::vector<Tensor>* grads) const {
  FilterNet g(depth_, width_);
  // Crop backward: scatter into the padded frame.
  Tensor d_body({dy.n(), 3, cache.padded.h(), cache.padded.w()});
  for (int n = 0; n < dy.n(); ++n)
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < dy.h(); ++y)
        for (int x = 0; x < dy.w(); ++x) d_body.at(n, c, y, x) = dy.at(n, c, y, x);
  Tensor d_head_out = PixelUnshuffle(d_body, 2);
  ConvGrads hg = Conv2dBackward(cache.head_in, head_.w, d_head_out, 1);
  g.head_.w = std::move(hg.dw);
  g.head_.b = std::move(hg.db);
  Tensor dh = std::move(hg.dx);
  for (size_t i = blocks_.size(); i-- > 0;) {
    dh = MbConvBackward(cache.blocks[i], blocks_[i], dh, &g.blocks_[i]);
  }
  ConvGrads sg = Conv2dBackward(cache.padded, stem_.w, dh, 2);
  g.stem_.w = std::move(sg.dw);
  g.stem_.b = std::move(sg.db);
  Tensor dx = ReflectPadToEvenBackward(sg.dx, cache.in_h, cache.in_w);
  dx.AddScaled(dy);

  auto src = g.Parameters();
  if (grads->size() != src.size()) *grads = ZeroGrads();
  for (size_t i = 0; i < src.size(); ++i) (*grads)[i].AddScaled(*src[i]);
  return dx;
}

int64_t FilterNet::CountParams() const {
  int64_t n = 0;
  for (const Tensor* t : Parameters()) n += static_cast<int64_t>(t->size());
  return n;
}

int64_t FilterNet::CountMacsPerPixel() const {
  // Everything after the stem runs at half resolution: accumulate the MACs of
  // one 2x2 input cell, then divide by its four pixels.
  int64_t per_cell = stem_.w.size();
  for (const auto& b : blocks_) {
    per_cell += b.expand.w.size() + b.depthwise.w.size() + b.project.w.size();
  }
  per_cell += head_.w.size();
  return (per_cell + 2) / 4;
}

bool FilterNet::operator==(const FilterNet& o) const {
  if (depth_ != o.depth_ || width_ != o.width_) return false;
  auto a = Parameters(), b = o.Parameters();
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(*a[i] == *b[i])) return false;
  }
  return true;
}

int64_t CountFilterParams(int depth, int width) {
  const int64_t c = width, w4 = kExpansion * width;
  const int64_t stem = 3 * c * 9 + c;
  const int64_t expand = c * w4 + w4;
  const int64_t dw = w4 * 9 + w4;
  const int64_t project = w4 * c + c;
  const int64_t head = w4 * kOutChannels * 9 + kOutChannels;
  return stem + (depth - 1) * (expand + dw + project) + (expand + dw) + head;
}

int64_t CountFilterMacsPerPixel(int depth, int width) {
  const int64_t c = width, w4 = kExpansion * width;
  const int64_t block = c * w4 + w4 * 9 + w4 * c;
  const int64_t last = c * w4 + w4 * 9;
  const int64_t per_cell =
      27 * c + (depth - 1) * block + last + w4 * kOutChannels * 9;
  return (per_cell + 2) / 4;
}

std::vector<uint8_t> SerializeNets(std::span<const FilterNet* const> nets) {
  if (nets.empty()) Fail(ErrorCode::kInvalidArgument, "no networks to save");
  ByteWriter w;
  for (char ch : kCheckpointMagic) w.U8(static_cast<uint8_t>(ch));
  w.U32(static_cast<uint32_t>(nets[0]->depth()));
  w.U32(static_cast<uint32_t>(nets[0]->width()));
  uint32_t count = 0;
  for (const FilterNet* n : nets) {
    if (n->depth() != nets[0]->depth() || n->width() != nets[0]->width()) {
      Fail(ErrorCode::kInvalidArgument, "checkpoint nets must share L and C");
    }
    count += static_cast<uint32_t>(n->Parameters().size());
  }
  w.U32(count);
  for (const FilterNet* n : nets) {
    for (const Tensor* t : n->Parameters()) {
      w.U32(static_cast<uint32_t>(t->rank()));
      for (int d : t->shape()) w.U32(static_cast<uint32_t>(d));
      for (double v : t->values()) w.F32(static_cast<float>(v));
    }
  }
  return w.Take();
}

std::vector<FilterNet> DeserializeNets(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  for (char ch : kCheckpointMagic) {
    if (r.U8() != static_cast<uint8_t>(ch)) {
      Fail(ErrorCode::kFormat, "checkpoint: bad magic");
    }
  }
  const uint32_t depth = r.U32(), width = r.U32(), count = r.U32();
  if (depth < 1 || width < 1 || depth > 4096 || width > 4096) {
    Fail(ErrorCode::kFormat, "checkpoint: implausible L/C");
  }
  const FilterNet proto(static_cast<int>(depth), static_cast<int>(width));
  const size_t per_net = proto.Parameters().size();
  if (count == 0 || count % per_net != 0) {
    Fail(ErrorCode::kFormat, "checkpoint: tensor count does not match L/C");
  }
  std::vector<FilterNet> nets(count / per_net, proto);
  for (FilterNet& net : nets) {
    for (Tensor* t : net.Parameters()) {
      const uint32_t rank = r.U32();
      if (rank != static_cast<uint32_t>(t->rank())) {
        Fail(ErrorCode::kFormat, "checkpoint: tensor rank mismatch");
      }
      for (int d : t->shape()) {
        if (r.U32() != static_cast<uint32_t>(d)) {
          Fail(ErrorCode::kFormat, "checkpoint: tensor dims mismatch");
        }
      }
      for (double& v : t->values()) v = r.F32();
    }
  }
  if (r.remaining() != 0) Fail(ErrorCode::kFormat, "checkpoint: trailing bytes");
  return nets;
}

void SaveCheckpoint(const std::string& path,
                    std::span<const FilterNet* const> nets) {
  WriteFileBytes(path, SerializeNets(nets));
}

std::vector<FilterNet> LoadCheckpoint(const std::string& path) {
  return DeserializeNets(ReadFileBytes(path));
}

}  // namespace ssc
