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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convperf/conv_layer.hpp"
#include "convperf/tiling.hpp"
#include "convperf/traffic.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// GPU description
// ---------------------------------------------------------------------------
// Everything the timing model needs about a device, in SI units: bytes,
// bytes/second, seconds, Hz. Bandwidths marked per_sm are per-SM private
// paths; l2_bw and dram_bw are chip totals shared by all SMs.

struct GpuSpec {
  std::string name = "gpu";
  int64_t num_sm = 1;
  double core_clock_hz = 1.0e9;
  double mac_per_sec = 1.0e12;       // chip-total multiply-accumulates/s
  int64_t reg_bytes_per_sm = 256 * 1024;
  int64_t smem_bytes_per_sm = 96 * 1024;
  int64_t l2_bytes = 3 * 1024 * 1024;
  double l1_bw_per_sm = 90.0e9;
  double l2_bw = 1000.0e9;
  double dram_bw = 450.0e9;
  double smem_ld_bw_per_sm = 200.0e9;
  double smem_st_bw_per_sm = 200.0e9;
  double lat_l1_s = 0.0;
  double lat_l2_s = 0.0;
  double lat_dram_s = 0.0;
  double lat_smem_s = 0.0;
  L1Granularity gran;
  // Field names that hold estimated values rather than vendor or measured
  // figures; carried from the device file so reports can flag them.
  std::vector<std::string> estimated_fields;

  // Shared-path slices when all SMs pull concurrently.
  [[nodiscard]] double l2_bw_per_sm() const {
    return l2_bw / static_cast<double>(num_sm);
  }
  [[nodiscard]] double dram_bw_per_sm() const {
    return dram_bw / static_cast<double>(num_sm);
  }

  void validate() const {
    auto fail = [this](const std::string& what) {
      throw ValidationError("gpu '" + name + "': " + what);
    };
    if (name.empty()) fail("empty name");
    if (num_sm < 1) fail("num_sm must be >= 1");
    if (core_clock_hz <= 0.0) fail("core_clock_hz must be positive");
    if (mac_per_sec <= 0.0) fail("mac_per_sec must be positive");
    if (reg_bytes_per_sm < 1 || smem_bytes_per_sm < 1 || l2_bytes < 1)
      fail("storage sizes must be positive");
    if (l1_bw_per_sm <= 0.0 || l2_bw <= 0.0 || dram_bw <= 0.0 ||
        smem_ld_bw_per_sm <= 0.0 || smem_st_bw_per_sm <= 0.0)
      fail("bandwidths must be positive");
    if (lat_l1_s < 0.0 || lat_l2_s < 0.0 || lat_dram_s < 0.0 ||
        lat_smem_s < 0.0)
      fail("latencies must be >= 0");
    if (lat_l1_s > lat_l2_s || lat_l2_s > lat_dram_s)
      fail("latencies must satisfy l1 <= l2 <= dram");
    gran.validate();
  }
};

// ---------------------------------------------------------------------------
// Kernel resource footprint
// ---------------------------------------------------------------------------
// Per-CTA register and shared-memory budgets, the limiters for how many CTAs
// an SM can hold concurrently. Defaults are derived from the tiling: the
// accumulator tile lives in registers and the double-buffered operand stage
// lives in shared memory.

struct KernelSpec {
  std::optional<int64_t> num_act_cta;         // direct occupancy override
  std::optional<int64_t> reg_bytes_per_cta;
  std::optional<int64_t> smem_bytes_per_cta;
};

[[nodiscard]] inline int64_t default_reg_bytes_per_cta(const CtaTiling& tiling,
                                                       int64_t elem_bytes) {
  return tiling.cta_m * tiling.cta_n * elem_bytes;
}

[[nodiscard]] inline int64_t default_smem_bytes_per_cta(const CtaTiling& tiling,
                                                        int64_t elem_bytes) {
  return 2 * elem_bytes * (tiling.cta_m + tiling.cta_n) * tiling.cta_k;
}

// Concurrent CTAs per SM: the stricter of the register and shared-memory
// limits, unless overridden outright.
[[nodiscard]] inline int64_t active_ctas(const GpuSpec& gpu,
                                         const CtaTiling& tiling,
                                         int64_t elem_bytes,
                                         const KernelSpec& kernel = {}) {
  if (kernel.num_act_cta) {
    if (*kernel.num_act_cta < 1)
      throw ValidationError("active CTA override must be >= 1");
    return *kernel.num_act_cta;
  }
  int64_t regs = kernel.reg_bytes_per_cta
                     ? *kernel.reg_bytes_per_cta
                     : default_reg_bytes_per_cta(tiling, elem_bytes);
  int64_t smem = kernel.smem_bytes_per_cta
                     ? *kernel.smem_bytes_per_cta
                     : default_smem_bytes_per_cta(tiling, elem_bytes);
  if (regs < 1 || smem < 1)
    throw ValidationError("per-CTA resource budgets must be >= 1 byte");
  int64_t by_regs = gpu.reg_bytes_per_sm / regs;
  int64_t by_smem = gpu.smem_bytes_per_sm / smem;
  int64_t act = std::min(by_regs, by_smem);
  if (act < 1)
    throw ValidationError("gpu '" + gpu.name +
                          "': CTA does not fit on one SM (needs " +
                          std::to_string(regs) + " reg bytes, " +
                          std::to_string(smem) + " smem bytes)");
  return act;
}

}  // namespace convperf
