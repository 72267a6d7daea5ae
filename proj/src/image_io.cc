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

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ssc/image.h"
#include "ssc/status.h"

namespace ssc {
namespace {

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Reads one unsigned decimal header field, skipping whitespace and comments.
int ReadPnmField(std::span<const unsigned char> b, size_t* pos) {
  while (*pos < b.size()) {
    if (b[*pos] == '#') {
      while (*pos < b.size() && b[*pos] != '\n') ++*pos;
    } else if (std::isspace(b[*pos])) {
      ++*pos;
    } else {
      break;
    }
  }
  if (*pos >= b.size() || !std::isdigit(b[*pos])) {
    Fail(ErrorCode::kFormat, "ppm: malformed header");
  }
  long v = 0;
  while (*pos < b.size() && std::isdigit(b[*pos])) {
    v = v * 10 + (b[*pos] - '0');
    if (v > (1 << 24)) Fail(ErrorCode::kFormat, "ppm: header value too large");
    ++*pos;
  }
  return static_cast<int>(v);
}

ImageRGB FromInterleaved(const unsigned char* rgb, int h, int w) {
  ImageRGB img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const unsigned char* p = rgb + 3 * (static_cast<size_t>(y) * w + x);
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = FromByte(p[c]);
    }
  }
  return img;
}

std::vector<unsigned char> ToInterleaved(const ImageRGB& img) {
  std::vector<unsigned char> out(img.num_samples());
  size_t i = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out[i++] = ToByte(img.at(c, y, x));
    }
  }
  return out;
}

}  // namespace

std::string EncodePpm(const ImageRGB& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n255\n";
  const auto px = ToInterleaved(img);
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

ImageRGB DecodePpmPrefix(std::span<const unsigned char> bytes,
                         size_t* consumed) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    Fail(ErrorCode::kFormat, "ppm: missing P6 magic");
  }
  size_t pos = 2;
  const int w = ReadPnmField(bytes, &pos);
  const int h = ReadPnmField(bytes, &pos);
  const int maxval = ReadPnmField(bytes, &pos);
  if (maxval != 255) Fail(ErrorCode::kFormat, "ppm: only maxval 255 supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    Fail(ErrorCode::kFormat, "ppm: missing separator after header");
  }
  ++pos;
  const size_t need = 3 * static_cast<size_t>(w) * h;
  if (bytes.size() - pos < need) Fail(ErrorCode::kFormat, "ppm: truncated data");
  ImageRGB img = FromInterleaved(bytes.data() + pos, h, w);
  if (consumed) *consumed = pos + need;
  return img;
}

ImageRGB DecodePpm(std::span<const unsigned char> bytes) {
  return DecodePpmPrefix(bytes, nullptr);
}

std::vector<unsigned char> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::string& path, std::span<const unsigned char> b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

void WritePpm(const ImageRGB& img, const std::string& path) {
  const std::string s = EncodePpm(img);
  WriteFileBytes(path, {reinterpret_cast<const unsigned char*>(s.data()),
                        s.size()});
}

ImageRGB ReadPpm(const std::string& path) {
  return DecodePpm(ReadFileBytes(path));
}

void WritePng(const ImageRGB& img, const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  const auto px = ToInterleaved(img);
  if (!png_image_write_to_file(&image, path.c_str(), 0, px.data(), 0,
                               nullptr)) {
    Fail(ErrorCode::kIo, "png write failed (" + path + "): " + image.message);
  }
}

ImageRGB ReadPng(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    Fail(ErrorCode::kIo, "png read failed (" + path + "): " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> px(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
    png_image_free(&image);
    Fail(ErrorCode::kIo, "png decode failed (" + path + "): " + image.message);
  }
  return FromInterleaved(px.data(), static_cast<int>(image.height),
                         static_cast<int>(image.width));
}

ImageRGB ReadImage(const std::string& path) {
  const std::string l = Lower(path);
  if (EndsWith(l, ".png")) return ReadPng(path);
  if (EndsWith(l, ".ppm")) return ReadPpm(path);
  Fail(ErrorCode::kFormat, "unsupported image extension: " + path);
}

void WriteImage(const ImageRGB& img, const std::string& path) {
  const std::string l = Lower(path);
  if (EndsWith(l, ".png")) return WritePng(img, path);
  if (EndsWith(l, ".ppm")) return WritePpm(img, path);
  Fail(ErrorCode::kFormat, "unsupported image extension: " + path);
}

}  // namespace ssc
