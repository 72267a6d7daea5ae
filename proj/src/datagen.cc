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

#include "ssc/datagen.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <random>

#include "ssc/status.h"

namespace ssc {
namespace {

using Color = std::array<double, 3>;

class Canvas {
 public:
  Canvas(int size, std::mt19937_64* rng) : img_(size, size), rng_(rng) {}

  int Uniform(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(*rng_);
  }

  void Put(int y, int x, const Color& c) {
    if (y < 0 || x < 0 || y >= img_.height() || x >= img_.width()) return;
    for (int ch = 0; ch < 3; ++ch) img_.at(ch, y, x) = c[ch];
  }

  void Rect(int y0, int x0, int h, int w, const Color& c) {
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) Put(y, x, c);
  }

  // Random rectangle with sides in [min_side, max_side].
  void RandomBox(int min_side, int max_side, int* y0, int* x0, int* h, int* w) {
    const int n = img_.height();
    *h = Uniform(min_side, std::min(max_side, n));
    *w = Uniform(min_side, std::min(max_side, n));
    *y0 = Uniform(0, n - *h);
    *x0 = Uniform(0, n - *w);
  }

  ImageRGB& image() { return img_; }

 private:
  ImageRGB img_;
  std::mt19937_64* rng_;
};

// Rows of short runs in a text colour separated by background gaps.
void DrawGlyphRows(Canvas& cv, const std::vector<Color>& pal, int size) {
  int y0, x0, h, w;
  cv.RandomBox(8, size, &y0, &x0, &h, &w);
  const int np = static_cast<int>(pal.size());
  const int bgi = cv.Uniform(0, np - 1);
  const int fgi = (bgi + cv.Uniform(1, np - 1)) % np;
  const Color& bg = pal[bgi];
  const Color& fg = pal[fgi];
  cv.Rect(y0, x0, h, w, bg);
  const int line_h = cv.Uniform(5, 8);
  for (int ly = y0 + 1; ly + line_h - 1 <= y0 + h; ly += line_h + 2) {
    int x = x0 + 1;
    while (x < x0 + w - 1) {
      const int glyph = cv.Uniform(1, 4);
      const int gap = cv.Uniform(1, 3);
      // A glyph is a run pattern that changes from row to row.
      for (int r = 0; r < line_h - 1; ++r) {
        const int mask = cv.Uniform(1, (1 << glyph) - 1);
        for (int i = 0; i < glyph && x + i < x0 + w; ++i) {
          if (mask & (1 << i)) cv.Put(ly + r, x + i, fg);
        }
      }
      x += glyph + gap;
    }
  }
}

void DrawFlatRect(Canvas& cv, const std::vector<Color>& pal, int size) {
  int y0, x0, h, w;
  cv.RandomBox(3, size / 2 + 2, &y0, &x0, &h, &w);
  cv.Rect(y0, x0, h, w, pal[cv.Uniform(0, static_cast<int>(pal.size()) - 1)]);
}

// Banded ramp through consecutive palette entries with hard steps.
void DrawGradient(Canvas& cv, const std::vector<Color>& pal, int size) {
  int y0, x0, h, w;
  cv.RandomBox(6, size, &y0, &x0, &h, &w);
  const bool vertical = cv.Uniform(0, 1);
  const int band = cv.Uniform(2, 6);
  const int start = cv.Uniform(0, static_cast<int>(pal.size()) - 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int t = (vertical ? y : x) / band;
      cv.Put(y0 + y, x0 + x, pal[(start + t) % pal.size()]);
    }
}

void DrawGrid(Canvas& cv, const std::vector<Color>& pal, int size) {
  int y0, x0, h, w;
  cv.RandomBox(8, size, &y0, &x0, &h, &w);
  const Color& c = pal[cv.Uniform(0, static_cast<int>(pal.size()) - 1)];
  const int pitch = cv.Uniform(3, 8);
  for (int y = y0; y < y0 + h; y += pitch) cv.Rect(y, x0, 1, w, c);
  for (int x = x0; x < x0 + w; x += pitch) cv.Rect(y0, x, h, 1, c);
}

// Photographic-like inset: smooth colour field plus 8-bit noise.
void DrawNoisePatch(Canvas& cv, std::mt19937_64& rng, int size) {
  int y0, x0, h, w;
  cv.RandomBox(4, std::max(4, size / 3), &y0, &x0, &h, &w);
  std::uniform_int_distribution<int> base(40, 215), jitter(-40, 40);
  const Color c0{static_cast<double>(base(rng)), static_cast<double>(base(rng)),
                 static_cast<double>(base(rng))};
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) {
      Color c;
      for (int ch = 0; ch < 3; ++ch) {
        c[ch] = std::clamp(c0[ch] + jitter(rng), 0.0, 255.0) / 255.0;
      }
      cv.Put(y, x, c);
    }
}

}  // namespace

void ScSpec::Validate() const {
  if (size < 2) Fail(ErrorCode::kInvalidArgument, "generator size must be >= 2");
  if (palette_size < 2 || palette_size > 32) {
    Fail(ErrorCode::kInvalidArgument, "palette_size must be in 2..32");
  }
  double total = 0.0;
  for (double m : mix) {
    if (!(m >= 0.0)) Fail(ErrorCode::kInvalidArgument, "element weights must be >= 0");
    total += m;
  }
  if (!(total > 0.0)) Fail(ErrorCode::kInvalidArgument, "no element weight is positive");
}

ImageRGB GenScreenImage(const ScSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> byte(0, 255);
  // Distinct 8-bit colours so files round-trip exactly.
  std::vector<Color> pal;
  while (static_cast<int>(pal.size()) < spec.palette_size) {
    Color c{byte(rng) / 255.0, byte(rng) / 255.0, byte(rng) / 255.0};
    if (std::find(pal.begin(), pal.end(), c) == pal.end()) pal.push_back(c);
  }

  Canvas cv(spec.size, &rng);
  cv.Rect(0, 0, spec.size, spec.size, pal[0]);
  std::discrete_distribution<int> pick(spec.mix.begin(), spec.mix.end());
  const int elements = 4 + spec.size / 8;
  for (int e = 0; e < elements; ++e) {
    switch (pick(rng)) {
      case kGlyphRows: DrawGlyphRows(cv, pal, spec.size); break;
      case kFlatRects: DrawFlatRect(cv, pal, spec.size); break;
      case kGradients: DrawGradient(cv, pal, spec.size); break;
      case kGridLines: DrawGrid(cv, pal, spec.size); break;
      default: DrawNoisePatch(cv, rng, spec.size); break;
    }
  }
  return std::move(cv.image());
}

Dataset LoadDirectory(const std::string& dir, int crop, Split split) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) Fail(ErrorCode::kIo, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Dataset ds;
  ds.split = split;
  for (const auto& f : files) {
    ImageRGB img = ReadImage(f.string());
    if (img.height() < crop || img.width() < crop) {
      std::cerr << "warning: skipping " << f.string() << " (" << img.width() << "x"
                << img.height() << " is smaller than crop " << crop << ")\n";
      continue;
    }
    ds.items.push_back(CenterCrop(img, crop));
    ds.names.push_back(f.filename().string());
  }
  if (ds.items.empty()) Fail(ErrorCode::kEmpty, "no usable images in " + dir);
  return ds;
}

Dataset GenerateDataset(const ScSpec& base, int count, int crop, Split split) {
  if (count < 1) Fail(ErrorCode::kEmpty, "generator count must be >= 1");
  Dataset ds;
  ds.split = split;
  for (int i = 0; i < count; ++i) {
    ScSpec s = base;
    s.seed = base.seed + static_cast<uint64_t>(i);
    ImageRGB img = GenScreenImage(s);
    if (img.height() < crop) {
      Fail(ErrorCode::kEmpty, "generated images are smaller than the crop");
    }
    ds.items.push_back(CenterCrop(img, crop));
    ds.names.push_back("gen_" + std::to_string(s.seed));
  }
  return ds;
}

}  // namespace ssc
