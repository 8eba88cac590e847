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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "convperf/gpu_spec.hpp"
#include "convperf/tiling.hpp"
#include "convperf/traffic.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Bottleneck labels
// ---------------------------------------------------------------------------
// Enumerator order doubles as the tie-break priority: when several execution
// regimes predict the same time, the earlier label wins and the estimate is
// flagged as a tie.

enum class Bottleneck : int {
  kMac = 0,      // math pipe limited, latency hidden
  kSmem = 1,     // shared-memory pipe limited
  kL1Bw = 2,     // L1/global load path saturated
  kL2Bw = 3,     // shared L2 bandwidth saturated
  kDramBw = 4,   // DRAM bandwidth saturated
  kDramLat = 5,  // memory latency exposed, too few CTAs to hide it
};

inline constexpr int kNumBottlenecks = 6;

[[nodiscard]] inline const char* to_string(Bottleneck b) {
  switch (b) {
    case Bottleneck::kMac: return "MAC";
    case Bottleneck::kSmem: return "SMEM";
    case Bottleneck::kL1Bw: return "L1_BW";
    case Bottleneck::kL2Bw: return "L2_BW";
    case Bottleneck::kDramBw: return "DRAM_BW";
    case Bottleneck::kDramLat: return "DRAM_LAT";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Per-loop phase times
// ---------------------------------------------------------------------------

// Global load score: slowest memory level to deliver one loop's operand
// bytes to one CTA, latency plus transfer at that SM's bandwidth share.
[[nodiscard]] inline double t_gls(const GpuSpec& gpu,
                                  const TrafficEstimate& traffic) {
  double l1 = gpu.lat_l1_s + traffic.l1_bytes_per_loop / gpu.l1_bw_per_sm;
  double l2 = gpu.lat_l2_s + traffic.l2_bytes_per_loop / gpu.l2_bw_per_sm();
  double dram =
      gpu.lat_dram_s + traffic.dram_bytes_per_loop / gpu.dram_bw_per_sm();
  return std::max({l1, l2, dram});
}

// Shared-memory score: stage one loop's operand tiles into shared memory and
// read the warp tiles back out.
[[nodiscard]] inline double t_sas(const GpuSpec& gpu, const CtaTiling& tiling,
                                  int64_t elem_bytes) {
  double elem = static_cast<double>(elem_bytes);
  double store = elem * static_cast<double>(tiling.cta_m + tiling.cta_n) *
                 static_cast<double>(tiling.cta_k) / gpu.smem_st_bw_per_sm;
  double load = elem * static_cast<double>(tiling.warp_m + tiling.warp_n) *
                static_cast<double>(tiling.cta_k) *
                static_cast<double>(tiling.num_warps) / gpu.smem_ld_bw_per_sm;
  return store + load;
}

// Compute score: the loop's multiply-accumulates at one SM's math rate.
[[nodiscard]] inline double t_cs(const GpuSpec& gpu, const CtaTiling& tiling) {
  double macs = static_cast<double>(tiling.cta_m) *
                static_cast<double>(tiling.cta_n) *
                static_cast<double>(tiling.cta_k);
  return macs / (gpu.mac_per_sec / static_cast<double>(gpu.num_sm));
}

// ---------------------------------------------------------------------------
// Ramp-up and drain
// ---------------------------------------------------------------------------

// Pipeline fill before the first loop overlaps anything: fetch a tile's worth
// of data from DRAM, stage it, and read the first warp tiles.
[[nodiscard]] inline double t_prologue(const GpuSpec& gpu,
                                       const CtaTiling& tiling,
                                       int64_t elem_bytes) {
  double elem = static_cast<double>(elem_bytes);
  double tile = elem * static_cast<double>(tiling.cta_m) *
                static_cast<double>(tiling.cta_n);
  double fetch = gpu.lat_dram_s + tile / gpu.dram_bw_per_sm();
  double stage = gpu.lat_smem_s + tile / gpu.smem_st_bw_per_sm;
  double first_read = elem * static_cast<double>(tiling.warp_m + tiling.warp_n) *
                      static_cast<double>(tiling.cta_k) *
                      static_cast<double>(tiling.num_warps) /
                      gpu.smem_ld_bw_per_sm;
  return fetch + stage + first_read;
}

// Result-tile writeback at the full DRAM rate. The bandwidth-bound regimes
// instead drain through whichever level is the bottleneck.
[[nodiscard]] inline double t_epilogue(const GpuSpec& gpu,
                                       const CtaTiling& tiling,
                                       int64_t elem_bytes) {
  double tile = static_cast<double>(elem_bytes) *
                static_cast<double>(tiling.cta_m) *
                static_cast<double>(tiling.cta_n);
  return tile / gpu.dram_bw;
}

[[nodiscard]] inline double t_epilogue_at(const GpuSpec& gpu,
                                          const CtaTiling& tiling,
                                          int64_t elem_bytes, Bottleneck level) {
  double tile = static_cast<double>(elem_bytes) *
                static_cast<double>(tiling.cta_m) *
                static_cast<double>(tiling.cta_n);
  switch (level) {
    case Bottleneck::kL1Bw: return tile / gpu.l1_bw_per_sm;
    case Bottleneck::kL2Bw: return tile / gpu.l2_bw;
    case Bottleneck::kDramBw: return tile / gpu.dram_bw;
    default: throw ValidationError("epilogue level must be a bandwidth level");
  }
}

// ---------------------------------------------------------------------------
// Layer execution time
// ---------------------------------------------------------------------------
// Six candidate regimes, each a full start-to-finish time under one
// assumption about the limiting resource; the slowest one is the estimate.
//   MAC / SMEM:  per-SM pipes limit steady state, memory fully hidden.
//   DRAM_LAT:    concurrency cannot hide load latency; loops serialize on the
//                global load score, softened by the active-CTA overlap.
//   L1/L2/DRAM_BW: one memory level saturates; time is bytes over bandwidth.

struct PerfEstimate {
  double gls_s = 0.0;
  double sas_s = 0.0;
  double cs_s = 0.0;
  double prologue_s = 0.0;
  double epilogue_s = 0.0;
  std::array<double, kNumBottlenecks> candidate_s{};  // indexed by Bottleneck
  double total_s = 0.0;
  double cycles = 0.0;
  Bottleneck bottleneck = Bottleneck::kMac;
  // 1 math-bound, 2 latency-bound, 3 math pipes waiting on loads,
  // 4 bandwidth-bound.
  int timing_case = 1;
  bool tie = false;
};

[[nodiscard]] inline PerfEstimate estimate_time(const GpuSpec& gpu,
                                                const CtaTiling& tiling,
                                                const LaunchGeometry& launch,
                                                const TrafficEstimate& traffic,
                                                int64_t elem_bytes,
                                                int64_t act_cta) {
  gpu.validate();
  tiling.validate();
  if (act_cta < 1)
    throw ValidationError("estimate_time: act_cta must be >= 1");

  PerfEstimate p;
  p.gls_s = t_gls(gpu, traffic);
  p.sas_s = t_sas(gpu, tiling, elem_bytes);
  p.cs_s = t_cs(gpu, tiling);
  p.prologue_s = t_prologue(gpu, tiling, elem_bytes);
  p.epilogue_s = t_epilogue(gpu, tiling, elem_bytes);

  double loops = static_cast<double>(launch.num_loops);
  double waves = static_cast<double>(
      ceil_div(launch.num_cta, gpu.num_sm));  // CTA waves per SM

  // Pipe-limited regimes: every loop costs the pipe score, waves serialize.
  p.candidate_s[static_cast<int>(Bottleneck::kMac)] =
      p.prologue_s + (p.cs_s * loops + p.epilogue_s) * waves;
  p.candidate_s[static_cast<int>(Bottleneck::kSmem)] =
      p.prologue_s + (p.sas_s * loops + p.epilogue_s) * waves;

  // Latency-limited regime: each loop pays the full load score plus the
  // per-K-slice math it cannot hide; act_cta CTAs overlap on one SM.
  double exposed = p.gls_s + std::max(p.cs_s, p.sas_s) /
                                 static_cast<double>(tiling.cta_k);
  p.candidate_s[static_cast<int>(Bottleneck::kDramLat)] =
      p.prologue_s +
      (exposed * loops + p.epilogue_s) * waves / static_cast<double>(act_cta);

  // Bandwidth-limited regimes: the level's per-loop bytes at this SM's share,
  // drained through the same level.
  auto bw_candidate = [&](Bottleneck level, double bytes_per_loop,
                          double bw_share) {
    p.candidate_s[static_cast<int>(level)] =
        p.prologue_s +
        (bytes_per_loop / bw_share * loops +
         t_epilogue_at(gpu, tiling, elem_bytes, level)) *
            waves;
  };
  bw_candidate(Bottleneck::kL1Bw, traffic.l1_bytes_per_loop, gpu.l1_bw_per_sm);
  bw_candidate(Bottleneck::kL2Bw, traffic.l2_bytes_per_loop,
               gpu.l2_bw_per_sm());
  bw_candidate(Bottleneck::kDramBw, traffic.dram_bytes_per_loop,
               gpu.dram_bw_per_sm());

  int best = 0;
  for (int i = 1; i < kNumBottlenecks; ++i)
    if (p.candidate_s[i] > p.candidate_s[best]) best = i;
  p.total_s = p.candidate_s[best];
  p.bottleneck = static_cast<Bottleneck>(best);
  for (int i = 0; i < kNumBottlenecks; ++i) {
    if (i == best) continue;
    if (std::abs(p.candidate_s[i] - p.total_s) <= 1e-9 * p.total_s)
      p.tie = true;
  }

  switch (p.bottleneck) {
    case Bottleneck::kMac:
    case Bottleneck::kSmem:
      p.timing_case = std::max(p.cs_s, p.sas_s) >= p.gls_s ? 1 : 3;
      break;
    case Bottleneck::kDramLat:
      p.timing_case = 2;
      break;
    default:
      p.timing_case = 4;
      break;
  }
  p.cycles = p.total_s * gpu.core_clock_hz;
  return p;
}

}  // namespace convperf
