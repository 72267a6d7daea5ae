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

// RFC 4180 tables.

#ifndef SSC_CSV_H_
#define SSC_CSV_H_

#include <string>
#include <vector>

#include "ssc/bd_rate.h"

namespace ssc {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void AddRow(std::vector<std::string> row);
  // Index of |name| in the header; throws kFormat when absent.
  size_t Column(const std::string& name) const;
};

// 17 significant digits, so doubles survive a text round trip.
std::string FormatDouble(double v);
double ParseDouble(const std::string& s);

std::string FormatCsv(const CsvTable& t);
CsvTable ParseCsv(const std::string& text);

// Throws kInvalidArgument for a table without rows (nothing is written).
void WriteCsv(const CsvTable& t, const std::string& path);
CsvTable ReadCsv(const std::string& path);

// series, bpp, psnr
void WriteRdPlotData(const std::vector<RdCurve>& curves, const std::string& path);
// Reads the bpp and psnr columns of a CSV into one curve.
RdCurve ReadRdCurve(const std::string& path);

}  // namespace ssc

#endif  // SSC_CSV_H_
