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

#include "ssc/csv.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssc/status.h"

namespace ssc {
namespace {

std::string Quote(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void CsvTable::AddRow(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    Fail(ErrorCode::kInvalidArgument, "CSV row width differs from the header");
  }
  rows.push_back(std::move(row));
}

size_t CsvTable::Column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  Fail(ErrorCode::kFormat, "CSV has no column '" + name + "'");
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) Fail(ErrorCode::kFormat, "not a number: '" + s + "'");
  return v;
}

std::string FormatCsv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += Quote(fields[i]);
    }
    out += "\r\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

CsvTable ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
      }
      field.clear();
      rec.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) Fail(ErrorCode::kFormat, "CSV ends inside a quoted field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) Fail(ErrorCode::kFormat, "CSV is empty");
  CsvTable t;
  t.header = records[0];
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size()) {
      Fail(ErrorCode::kFormat, "CSV line " + std::to_string(i + 1) + " has " +
                                   std::to_string(records[i].size()) + " fields");
    }
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

void WriteCsv(const CsvTable& t, const std::string& path) {
  if (t.rows.empty()) Fail(ErrorCode::kInvalidArgument, "refusing to write an empty table");
  const std::string text = FormatCsv(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path);
}

CsvTable ReadCsv(const std::string& path) { return ParseCsv(ReadText(path)); }

void WriteRdPlotData(const std::vector<RdCurve>& curves, const std::string& path) {
  CsvTable t{{"series", "bpp", "psnr"}, {}};
  for (const RdCurve& c : curves)
    for (const RdPoint& p : c.points)
      t.AddRow({c.name, FormatDouble(p.bpp), FormatDouble(p.psnr_db)});
  WriteCsv(t, path);
}

RdCurve ReadRdCurve(const std::string& path) {
  const CsvTable t = ReadCsv(path);
  const size_t b = t.Column("bpp"), p = t.Column("psnr");
  RdCurve c;
  c.name = path;
  for (const auto& r : t.rows) c.points.push_back({ParseDouble(r[b]), ParseDouble(r[p])});
  return c;
}

}  // namespace ssc
