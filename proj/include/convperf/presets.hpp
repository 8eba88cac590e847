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

#include <string>
#include <vector>

#include "convperf/gpu_spec.hpp"
#include "convperf/io.hpp"
#include "convperf/scaling.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Bundled device descriptions
// ---------------------------------------------------------------------------
// Stored in the same text format the CLI accepts from disk and parsed on
// demand, so the bundled data exercises the regular parser and --dump prints
// exactly what a user file would contain. Datasheet figures come from vendor
// specifications; 'estimate' entries are derived (shared-memory bandwidth of
// 128 bytes/cycle at core clock) or typical measured latencies for the
// generation.

inline constexpr const char* kDeviceTitanXp = R"(# Pascal desktop part, 128-byte L1 requests
name titan-xp
num_sm 30
core_clock_ghz 1.58
fp32_gflops 12134
reg_kb_per_sm 256
smem_kb_per_sm 96
l2_mb 3
l1_gbps_per_sm 92
l2_gbps 1051
dram_gbps 450
smem_ld_gbps_per_sm 202.24 estimate
smem_st_gbps_per_sm 202.24 estimate
lat_l1_cycles 28 estimate
lat_l2_cycles 220 estimate
lat_dram_cycles 560 estimate
lat_smem_cycles 19 estimate
l1_coalesce_bytes 128
)";

inline constexpr const char* kDeviceP100 = R"(# Pascal HBM part, 128-byte L1 requests
name p100
num_sm 56
core_clock_ghz 1.2
fp32_gflops 8602
reg_kb_per_sm 256
smem_kb_per_sm 64
l2_mb 4
l1_gbps_per_sm 38.1
l2_gbps 1382
dram_gbps 550
smem_ld_gbps_per_sm 153.6 estimate
smem_st_gbps_per_sm 153.6 estimate
lat_l1_cycles 28 estimate
lat_l2_cycles 220 estimate
lat_dram_cycles 560 estimate
lat_smem_cycles 19 estimate
l1_coalesce_bytes 128
)";

inline constexpr const char* kDeviceV100 = R"(# Volta HBM part, 32-byte L1 requests
name v100
num_sm 84
core_clock_ghz 1.38
fp32_gflops 14837
reg_kb_per_sm 256
smem_kb_per_sm 94
l2_mb 6
l1_gbps_per_sm 94.1
l2_gbps 2167
dram_gbps 850
smem_ld_gbps_per_sm 176.64 estimate
smem_st_gbps_per_sm 176.64 estimate
lat_l1_cycles 28 estimate
lat_l2_cycles 220 estimate
lat_dram_cycles 560 estimate
lat_smem_cycles 19 estimate
l1_coalesce_bytes 32
)";

[[nodiscard]] inline std::vector<std::string> preset_device_names() {
  return {"titan-xp", "p100", "v100"};
}

[[nodiscard]] inline const char* preset_device_text(const std::string& name) {
  if (name == "titan-xp") return kDeviceTitanXp;
  if (name == "p100") return kDeviceP100;
  if (name == "v100") return kDeviceV100;
  throw ValidationError("unknown device preset '" + name + "'");
}

[[nodiscard]] inline GpuSpec preset_device(const std::string& name) {
  return parse_device_text(preset_device_text(name), "preset:" + name);
}

// ---------------------------------------------------------------------------
// Bundled design options
// ---------------------------------------------------------------------------
// A ladder of scaled-up devices for the resource study, from doubling the SM
// count to an 8x-math single SM with triple-size register file and shared
// memory and a widened 256x256 CTA tile.

inline constexpr const char* kDesignOptionsText = R"(# Resource scaling ladder
option opt1
n_sm 2
l2_bw 1.5
dram_bw 1.5

option opt2
n_sm 4
l2_bw 2
dram_bw 2

option opt3
mac_bw_per_sm 2

option opt4
mac_bw_per_sm 4

option opt5
mac_bw_per_sm 4
regs 2
smem_size 2
smem_bw 2
l1_bw 1.5
l2_bw 1.5
dram_bw 1.5

option opt6
mac_bw_per_sm 6
regs 2
smem_size 2
smem_bw 2
l1_bw 2
l2_bw 1.5
dram_bw 2

option opt7
mac_bw_per_sm 8
regs 3
smem_size 3
smem_bw 3
l1_bw 2
l2_bw 2
dram_bw 2
cta_tile_hw 256

option opt8
n_sm 2
mac_bw_per_sm 4
regs 2
smem_size 2
smem_bw 2
l1_bw 2
l2_bw 2
dram_bw 2
cta_tile_hw 256

option opt9
mac_bw_per_sm 8
regs 3
smem_size 3
smem_bw 3
l1_bw 2
l2_bw 2
dram_bw 3
cta_tile_hw 256
)";

[[nodiscard]] inline std::vector<DesignOption> preset_design_options() {
  return parse_options_text(kDesignOptionsText, "preset:options");
}

}  // namespace convperf
