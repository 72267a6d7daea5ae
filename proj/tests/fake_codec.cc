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

// Stand-in external codec for tests.
//
//   fake_codec <mode> --quality <q>
//
// identity  returns the input, coded size = raw RGB bytes
// lossless  returns the input, coded size = half the raw bytes
// corrupt   writes a broken size field and PPM
// fail      prints to stderr and exits 3
// resize    returns an image of different dimensions
// sleep     never answers

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "ssc/image.h"

int main(int argc, char** argv) {
  if (argc < 4 || std::string(argv[2]) != "--quality") {
    std::cerr << "usage: fake_codec <mode> --quality <q>\n";
    return 2;
  }
  const std::string mode = argv[1];
  std::vector<unsigned char> in((std::istreambuf_iterator<char>(std::cin)),
                                std::istreambuf_iterator<char>());
  if (mode == "fail") {
    std::cerr << "fake codec failure\n";
    return 3;
  }
  if (mode == "sleep") {
    sleep(30);
    return 0;
  }
  if (mode == "corrupt") {
    std::fwrite("\x01\x02\x03", 1, 3, stdout);
    std::fwrite("P3\n", 1, 3, stdout);
    return 0;
  }
  ssc::ImageRGB img = ssc::DecodePpm(in);
  if (mode == "resize") img = ssc::CenterCrop(img, std::min(img.height(), img.width()) - 1);
  uint64_t bytes = 3ULL * img.plane_size();
  if (mode == "lossless") bytes /= 2;
  unsigned char size[8];
  for (int i = 0; i < 8; ++i) size[i] = static_cast<unsigned char>(bytes >> (8 * i));
  std::fwrite(size, 1, 8, stdout);
  const std::string ppm = ssc::EncodePpm(img);
  std::fwrite(ppm.data(), 1, ppm.size(), stdout);
  return 0;
}
