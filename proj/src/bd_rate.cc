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

#include "ssc/bd_rate.h"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "ssc/status.h"

namespace ssc {

bool RdCurve::Normalize() {
  for (const RdPoint& p : points) {
    if (!std::isfinite(p.bpp) || !std::isfinite(p.psnr_db) || p.bpp <= 0.0) {
      Fail(ErrorCode::kInvalidArgument, "RD point must be finite with bpp > 0");
    }
  }
  std::sort(points.begin(), points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
  bool monotone = true;
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].bpp == points[i - 1].bpp) {
      Fail(ErrorCode::kInvalidArgument, "RD curve has repeated bpp");
    }
    if (points[i].psnr_db < points[i - 1].psnr_db) monotone = false;
  }
  if (!monotone) {
    std::cerr << "warning: PSNR decreases with bpp on curve '" << name << "'\n";
  }
  return monotone;
}

AkimaSpline::AkimaSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 4 || y_.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "Akima interpolation needs at least 4 points");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      Fail(ErrorCode::kInvalidArgument, "Akima abscissae must be strictly increasing");
    }
  }
  // m[k + 2] is the secant slope of segment k; two virtual slopes per end.
  std::vector<double> m(n + 3);
  for (size_t k = 0; k + 1 < n; ++k) {
    m[k + 2] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
  }
  m[1] = 2.0 * m[2] - m[3];
  m[0] = 2.0 * m[1] - m[2];
  m[n + 1] = 2.0 * m[n] - m[n - 1];
  m[n + 2] = 2.0 * m[n + 1] - m[n];
  d_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double w1 = std::abs(m[i + 3] - m[i + 2]);
    const double w2 = std::abs(m[i + 1] - m[i]);
    d_[i] = w1 + w2 > 0.0 ? (w1 * m[i + 1] + w2 * m[i + 2]) / (w1 + w2)
                          : 0.5 * (m[i + 1] + m[i + 2]);
  }
}

size_t AkimaSpline::Segment(double t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  size_t i = it == x_.begin() ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double AkimaSpline::operator()(double t) const {
  const size_t i = Segment(t);
  const double h = x_[i + 1] - x_[i], s = (t - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

// Integral of the Hermite cubic of segment i over local s in [u0, u1].
double AkimaSpline::SegmentIntegral(size_t i, double u0, double u1) const {
  const double h = x_[i + 1] - x_[i];
  // Antiderivatives of the Hermite basis in s.
  auto prim = [&](double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double H00 = s - s3 + 0.5 * s4;
    const double H10 = 0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4;
    const double H01 = s3 - 0.5 * s4;
    const double H11 = 0.25 * s4 - s3 / 3.0;
    return H00 * y_[i] + H10 * h * d_[i] + H01 * y_[i + 1] + H11 * h * d_[i + 1];
  };
  return h * (prim(u1) - prim(u0));
}

double AkimaSpline::Integrate(double a, double b) const {
  if (b < a) return -Integrate(b, a);
  double total = 0.0;
  for (size_t i = 0; i + 1 < x_.size(); ++i) {
    const double lo = std::max(a, x_[i]), hi = std::min(b, x_[i + 1]);
    if (hi <= lo) continue;
    const double h = x_[i + 1] - x_[i];
    total += SegmentIntegral(i, (lo - x_[i]) / h, (hi - x_[i]) / h);
  }
  return total;
}

namespace {

AkimaSpline RateOfQuality(const RdCurve& c) {
  std::vector<RdPoint> pts = c.points;
  std::sort(pts.begin(), pts.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.psnr_db < b.psnr_db; });
  std::vector<double> x, y;
  for (const RdPoint& p : pts) {
    if (!(p.bpp > 0.0) || !std::isfinite(p.psnr_db)) {
      Fail(ErrorCode::kInvalidArgument, "RD point must be finite with bpp > 0");
    }
    x.push_back(p.psnr_db);
    y.push_back(std::log10(p.bpp));
  }
  return AkimaSpline(std::move(x), std::move(y));
}

}  // namespace

double BdRate(const RdCurve& anchor, const RdCurve& test) {
  if (anchor.points.size() < 4 || test.points.size() < 4) {
    Fail(ErrorCode::kInvalidArgument, "BD-rate needs at least 4 points per curve");
  }
  const AkimaSpline a = RateOfQuality(anchor), t = RateOfQuality(test);
  auto range = [](const RdCurve& c) {
    auto [lo, hi] = std::minmax_element(
        c.points.begin(), c.points.end(),
        [](const RdPoint& p, const RdPoint& q) { return p.psnr_db < q.psnr_db; });
    return std::pair<double, double>(lo->psnr_db, hi->psnr_db);
  };
  const auto [alo, ahi] = range(anchor);
  const auto [tlo, thi] = range(test);
  const double lo = std::max(alo, tlo), hi = std::min(ahi, thi);
  if (!(hi > lo)) Fail(ErrorCode::kInvalidArgument, "RD curves do not overlap in PSNR");
  const double avg = (t.Integrate(lo, hi) - a.Integrate(lo, hi)) / (hi - lo);
  return 100.0 * (std::pow(10.0, avg) - 1.0);
}

}  // namespace ssc
