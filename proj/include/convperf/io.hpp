// Copyright (c) 2026, the convperf authors. All rights reserved.
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

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "convperf/conv_layer.hpp"
#include "convperf/estimate.hpp"
#include "convperf/gpu_spec.hpp"
#include "convperf/scaling.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Deterministic number formatting
// ---------------------------------------------------------------------------
// All emitted numbers go through std::to_chars: locale-free, shortest form,
// identical across runs.

[[nodiscard]] inline std::string format_sig6(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

[[nodiscard]] inline std::string format_int(int64_t v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

[[nodiscard]] inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view s,
                                                         char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] inline void parse_fail(const std::string& source, int line,
                                    const std::string& what) {
  throw ValidationError(source + ":" + format_int(line) + ": " + what);
}

[[nodiscard]] inline int64_t parse_int(std::string_view tok,
                                       const std::string& source, int line,
                                       const std::string& field) {
  tok = trim(tok);
  int64_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    parse_fail(source, line, "field '" + field + "': '" + std::string(tok) +
                                 "' is not an integer");
  return v;
}

[[nodiscard]] inline double parse_double(std::string_view tok,
                                         const std::string& source, int line,
                                         const std::string& field) {
  tok = trim(tok);
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    parse_fail(source, line, "field '" + field + "': '" + std::string(tok) +
                                 "' is not a number");
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Layer CSV
// ---------------------------------------------------------------------------
// Schema (one conv layer per row, '#' starts a comment line):
//   name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad

inline constexpr const char* kLayerCsvHeader =
    "name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad";

[[nodiscard]] inline std::vector<ConvLayerConfig> parse_layer_csv(
    std::istream& in, const std::string& source) {
  std::vector<ConvLayerConfig> layers;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body != kLayerCsvHeader)
        detail::parse_fail(source, lineno,
                           std::string("expected header '") + kLayerCsvHeader +
                               "', got '" + std::string(body) + "'");
      header_seen = true;
      continue;
    }
    auto fields = detail::split(body, ',');
    if (fields.size() != 10)
      detail::parse_fail(source, lineno,
                         "expected 10 fields, got " +
                             format_int(static_cast<int64_t>(fields.size())));
    ConvLayerConfig cfg;
    cfg.name = std::string(detail::trim(fields[0]));
    cfg.batch = detail::parse_int(fields[1], source, lineno, "B");
    cfg.in_channels = detail::parse_int(fields[2], source, lineno, "C_i");
    cfg.in_h = detail::parse_int(fields[3], source, lineno, "H_i");
    cfg.in_w = detail::parse_int(fields[4], source, lineno, "W_i");
    cfg.out_channels = detail::parse_int(fields[5], source, lineno, "C_o");
    cfg.filter_h = detail::parse_int(fields[6], source, lineno, "H_f");
    cfg.filter_w = detail::parse_int(fields[7], source, lineno, "W_f");
    cfg.stride = detail::parse_int(fields[8], source, lineno, "Strd");
    cfg.pad = detail::parse_int(fields[9], source, lineno, "Pad");
    try {
      cfg.validate();
    } catch (const ValidationError& e) {
      detail::parse_fail(source, lineno, e.what());
    }
    if (!seen.insert(cfg.name).second)
      detail::parse_fail(source, lineno,
                         "duplicate layer name '" + cfg.name + "'");
    layers.push_back(std::move(cfg));
  }
  if (!header_seen)
    throw ValidationError(source + ": no header line found");
  if (layers.empty())
    throw ValidationError(source + ": no layer rows found");
  return layers;
}

[[nodiscard]] inline std::vector<ConvLayerConfig> parse_layer_csv_text(
    const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_layer_csv(in, source);
}

[[nodiscard]] inline std::vector<ConvLayerConfig> load_layer_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open layer file '" + path + "'");
  return parse_layer_csv(in, path);
}

inline void write_layer_csv(std::ostream& out,
                            const std::vector<ConvLayerConfig>& layers) {
  out << kLayerCsvHeader << "\n";
  for (const auto& cfg : layers) {
    if (cfg.name.find_first_of(",\n#") != std::string::npos)
      throw ValidationError("layer name '" + cfg.name +
                            "' cannot be written to CSV");
    out << cfg.name << ',' << format_int(cfg.batch) << ','
        << format_int(cfg.in_channels) << ',' << format_int(cfg.in_h) << ','
        << format_int(cfg.in_w) << ',' << format_int(cfg.out_channels) << ','
        << format_int(cfg.filter_h) << ',' << format_int(cfg.filter_w) << ','
        << format_int(cfg.stride) << ',' << format_int(cfg.pad) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Device description files
// ---------------------------------------------------------------------------
// Flat "key value" lines; a trailing 'estimate' token marks values that are
// educated guesses rather than vendor or measured figures. '#' starts a
// comment. All keys are required except l1_coalesce_bytes (default 128).
//
//   name            string        core_clock_ghz     GHz
//   num_sm          count         fp32_gflops        chip total, 2 flop/MAC
//   reg_kb_per_sm   KiB           smem_kb_per_sm     KiB
//   l2_mb           MiB           l1_gbps_per_sm     GB/s (1e9)
//   l2_gbps         GB/s total    dram_gbps          GB/s total
//   smem_ld_gbps_per_sm, smem_st_gbps_per_sm         GB/s
//   lat_l1_cycles, lat_l2_cycles, lat_dram_cycles, lat_smem_cycles
//   l1_coalesce_bytes  32|64|128

[[nodiscard]] inline GpuSpec parse_device_file(std::istream& in,
                                               const std::string& source) {
  struct Entry {
    std::string value;
    bool estimate = false;
    int line = 0;
  };
  std::map<std::string, Entry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream tok{std::string(body)};
    std::string key, value, flag;
    tok >> key >> value;
    if (value.empty())
      detail::parse_fail(source, lineno, "expected 'key value [estimate]'");
    Entry e{value, false, lineno};
    if (tok >> flag) {
      if (flag != "estimate")
        detail::parse_fail(source, lineno,
                           "unexpected trailing token '" + flag + "'");
      e.estimate = true;
    }
    if (!entries.emplace(key, e).second)
      detail::parse_fail(source, lineno, "duplicate key '" + key + "'");
  }

  GpuSpec gpu;
  auto take = [&](const char* key) -> Entry {
    auto it = entries.find(key);
    if (it == entries.end())
      throw ValidationError(source + ": missing key '" + std::string(key) +
                            "'");
    Entry e = it->second;
    if (e.estimate) gpu.estimated_fields.push_back(key);
    entries.erase(it);
    return e;
  };
  auto take_num = [&](const char* key) -> double {
    Entry e = take(key);
    return detail::parse_double(e.value, source, e.line, key);
  };

  gpu.name = take("name").value;
  gpu.num_sm = static_cast<int64_t>(take_num("num_sm"));
  gpu.core_clock_hz = take_num("core_clock_ghz") * 1.0e9;
  gpu.mac_per_sec = take_num("fp32_gflops") * 1.0e9 / 2.0;  // 2 flop per MAC
  gpu.reg_bytes_per_sm = static_cast<int64_t>(take_num("reg_kb_per_sm") * 1024);
  gpu.smem_bytes_per_sm =
      static_cast<int64_t>(take_num("smem_kb_per_sm") * 1024);
  gpu.l2_bytes = static_cast<int64_t>(take_num("l2_mb") * 1024 * 1024);
  gpu.l1_bw_per_sm = take_num("l1_gbps_per_sm") * 1.0e9;
  gpu.l2_bw = take_num("l2_gbps") * 1.0e9;
  gpu.dram_bw = take_num("dram_gbps") * 1.0e9;
  gpu.smem_ld_bw_per_sm = take_num("smem_ld_gbps_per_sm") * 1.0e9;
  gpu.smem_st_bw_per_sm = take_num("smem_st_gbps_per_sm") * 1.0e9;
  gpu.lat_l1_s = take_num("lat_l1_cycles") / gpu.core_clock_hz;
  gpu.lat_l2_s = take_num("lat_l2_cycles") / gpu.core_clock_hz;
  gpu.lat_dram_s = take_num("lat_dram_cycles") / gpu.core_clock_hz;
  gpu.lat_smem_s = take_num("lat_smem_cycles") / gpu.core_clock_hz;
  if (entries.count("l1_coalesce_bytes"))
    gpu.gran.coalesce_bytes =
        static_cast<int64_t>(take_num("l1_coalesce_bytes"));
  if (!entries.empty())
    detail::parse_fail(source, entries.begin()->second.line,
                       "unknown key '" + entries.begin()->first + "'");
  gpu.validate();
  return gpu;
}

[[nodiscard]] inline GpuSpec parse_device_text(const std::string& text,
                                               const std::string& source) {
  std::istringstream in(text);
  return parse_device_file(in, source);
}

[[nodiscard]] inline GpuSpec load_device_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open device file '" + path + "'");
  return parse_device_file(in, path);
}

// ---------------------------------------------------------------------------
// Design option files
// ---------------------------------------------------------------------------
// Blocks of "key value" lines, each opened by an 'option <name>' line.
// Unlisted multiplier keys stay at 1.0; cta_tile_hw defaults to 128.

[[nodiscard]] inline std::vector<DesignOption> parse_options_file(
    std::istream& in, const std::string& source) {
  std::vector<DesignOption> options;
  std::set<std::string> names;
  DesignOption cur;
  bool open = false;
  auto flush = [&]() {
    if (!open) return;
    cur.validate();
    if (!names.insert(cur.name).second)
      throw ValidationError(source + ": duplicate option '" + cur.name + "'");
    options.push_back(cur);
    cur = DesignOption{};
    open = false;
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream tok{std::string(body)};
    std::string key, value;
    tok >> key >> value;
    if (key == "option") {
      if (value.empty())
        detail::parse_fail(source, lineno, "option line needs a name");
      flush();
      cur.name = value;
      open = true;
      continue;
    }
    if (!open)
      detail::parse_fail(source, lineno,
                         "key '" + key + "' before any 'option' line");
    if (value.empty())
      detail::parse_fail(source, lineno, "expected 'key value'");
    double v = detail::parse_double(value, source, lineno, key);
    if (key == "n_sm") cur.n_sm = v;
    else if (key == "mac_bw_per_sm") cur.mac_bw_per_sm = v;
    else if (key == "regs") cur.regs = v;
    else if (key == "smem_size") cur.smem_size = v;
    else if (key == "smem_bw") cur.smem_bw = v;
    else if (key == "l1_bw") cur.l1_bw = v;
    else if (key == "l2_bw") cur.l2_bw = v;
    else if (key == "dram_bw") cur.dram_bw = v;
    else if (key == "cta_tile_hw") cur.cta_tile_hw = static_cast<int64_t>(v);
    else detail::parse_fail(source, lineno, "unknown key '" + key + "'");
  }
  flush();
  if (options.empty())
    throw ValidationError(source + ": no option blocks found");
  return options;
}

[[nodiscard]] inline std::vector<DesignOption> parse_options_text(
    const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse_options_file(in, source);
}

[[nodiscard]] inline std::vector<DesignOption> load_options_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open options file '" + path + "'");
  return parse_options_file(in, path);
}

// ---------------------------------------------------------------------------
// Estimate CSV
// ---------------------------------------------------------------------------
// Pinned column set; changing it is a format break for downstream readers.

[[nodiscard]] inline std::string csv_header() {
  return "name,m,n,k,cta_m,cta_n,cta_k,mli_ifmap,mli_filter,l1_bytes,"
         "l2_bytes,dram_bytes,cycles,time_s,bottleneck,case";
}

[[nodiscard]] inline std::string csv_row(const LayerEstimate& e) {
  std::string row;
  row += e.cfg.name;
  row += ',';
  row += format_int(e.shape.m);
  row += ',';
  row += format_int(e.shape.n);
  row += ',';
  row += format_int(e.shape.k);
  row += ',';
  row += format_int(e.tiling.cta_m);
  row += ',';
  row += format_int(e.tiling.cta_n);
  row += ',';
  row += format_int(e.tiling.cta_k);
  row += ',';
  row += format_sig6(e.traffic.mli_ifmap);
  row += ',';
  row += format_sig6(e.traffic.mli_filter);
  row += ',';
  row += format_sig6(e.traffic.l1_bytes);
  row += ',';
  row += format_sig6(e.traffic.l2_bytes);
  row += ',';
  row += format_sig6(e.traffic.dram_bytes);
  row += ',';
  row += format_sig6(e.perf.cycles);
  row += ',';
  row += format_sig6(e.perf.total_s);
  row += ',';
  row += to_string(e.perf.bottleneck);
  row += ',';
  row += format_int(e.perf.timing_case);
  return row;
}

}  // namespace convperf
