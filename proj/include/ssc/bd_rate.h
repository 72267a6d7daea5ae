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

#ifndef SSC_BD_RATE_H_
#define SSC_BD_RATE_H_

#include <string>
#include <vector>

namespace ssc {

struct RdPoint {
  double bpp = 0.0;
  double psnr_db = 0.0;

  bool operator==(const RdPoint&) const = default;
};

struct RdCurve {
  std::string name;
  std::vector<RdPoint> points;  // strictly increasing bpp

  // Sorts by bpp; throws kInvalidArgument for non-finite values, bpp <= 0 or
  // repeated bpp. Returns false (after a warning on stderr) when PSNR is not
  // non-decreasing.
  bool Normalize();
};

// Akima spline through (x_i, y_i), x strictly increasing, n >= 4. End slopes
// come from two virtual points on each side by quadratic extrapolation.
class AkimaSpline {
 public:
  AkimaSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  // Exact integral over [a, b] within the knot range.
  double Integrate(double a, double b) const;

  const std::vector<double>& slopes() const { return d_; }

 private:
  size_t Segment(double t) const;
  double SegmentIntegral(size_t i, double u0, double u1) const;

  std::vector<double> x_, y_, d_;
};

// Average bitrate difference of |test| against |anchor| at equal PSNR, in
// percent (negative: |test| needs fewer bits). Throws kInvalidArgument for
// fewer than 4 points or no PSNR overlap.
double BdRate(const RdCurve& anchor, const RdCurve& test);

}  // namespace ssc

#endif  // SSC_BD_RATE_H_
