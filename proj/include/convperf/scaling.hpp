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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "convperf/estimate.hpp"
#include "convperf/gpu_spec.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// GPU resource scaling study
// ---------------------------------------------------------------------------
// What-if evaluation of scaled-up devices: each design option multiplies a
// set of base-device resources and may widen the CTA tile, and the study
// reports the network speedup and the resulting bottleneck mix.

struct DesignOption {
  std::string name = "option";
  double n_sm = 1.0;           // SM count multiplier (scales total math rate)
  double mac_bw_per_sm = 1.0;  // per-SM math rate multiplier
  double regs = 1.0;           // register file size multiplier
  double smem_size = 1.0;      // shared memory size multiplier
  double smem_bw = 1.0;        // shared memory bandwidth multiplier
  double l1_bw = 1.0;          // per-SM L1 bandwidth multiplier
  double l2_bw = 1.0;          // total L2 bandwidth multiplier
  double dram_bw = 1.0;        // total DRAM bandwidth multiplier
  int64_t cta_tile_hw = 128;   // CTA tile height/width for auto selection

  void validate() const {
    if (name.empty()) throw ValidationError("design option: empty name");
    auto pos = [this](double v, const char* what) {
      if (!(v > 0.0))
        throw ValidationError("design option '" + name + "': " + what +
                              " multiplier must be positive");
    };
    pos(n_sm, "n_sm");
    pos(mac_bw_per_sm, "mac_bw_per_sm");
    pos(regs, "regs");
    pos(smem_size, "smem_size");
    pos(smem_bw, "smem_bw");
    pos(l1_bw, "l1_bw");
    pos(l2_bw, "l2_bw");
    pos(dram_bw, "dram_bw");
    if (cta_tile_hw != 128 && cta_tile_hw != 256)
      throw ValidationError("design option '" + name +
                            "': cta_tile_hw must be 128 or 256");
  }
};

[[nodiscard]] inline GpuSpec apply_option(const GpuSpec& base,
                                          const DesignOption& opt) {
  base.validate();
  opt.validate();
  GpuSpec g = base;
  g.name = base.name + "+" + opt.name;
  g.num_sm = std::llround(static_cast<double>(base.num_sm) * opt.n_sm);
  if (g.num_sm < 1)
    throw ValidationError("design option '" + opt.name +
                          "': scaled SM count is below 1");
  g.mac_per_sec = base.mac_per_sec * opt.n_sm * opt.mac_bw_per_sm;
  g.reg_bytes_per_sm =
      std::llround(static_cast<double>(base.reg_bytes_per_sm) * opt.regs);
  g.smem_bytes_per_sm =
      std::llround(static_cast<double>(base.smem_bytes_per_sm) * opt.smem_size);
  g.smem_ld_bw_per_sm = base.smem_ld_bw_per_sm * opt.smem_bw;
  g.smem_st_bw_per_sm = base.smem_st_bw_per_sm * opt.smem_bw;
  g.l1_bw_per_sm = base.l1_bw_per_sm * opt.l1_bw;
  g.l2_bw = base.l2_bw * opt.l2_bw;
  g.dram_bw = base.dram_bw * opt.dram_bw;
  g.validate();
  return g;
}

struct ScaleResult {
  std::string name;
  double total_s = 0.0;
  double speedup = 1.0;  // baseline time / option time
  std::array<int, kNumBottlenecks> bottleneck_layers{};
};

struct ScaleStudy {
  ScaleResult baseline;
  std::vector<ScaleResult> options;
};

[[nodiscard]] inline ScaleStudy run_scale_study(
    const std::vector<ConvLayerConfig>& layers, const GpuSpec& base,
    const std::vector<DesignOption>& options,
    const EstimateOptions& opts = {}) {
  ScaleStudy study;
  NetworkEstimate base_net = estimate_network(layers, base, opts);
  study.baseline.name = base.name;
  study.baseline.total_s = base_net.total_s;
  study.baseline.speedup = 1.0;
  study.baseline.bottleneck_layers = base_net.bottleneck_layers;

  for (const auto& opt : options) {
    GpuSpec scaled = apply_option(base, opt);
    EstimateOptions scaled_opts = opts;
    scaled_opts.tile_hw = opt.cta_tile_hw;
    NetworkEstimate net = estimate_network(layers, scaled, scaled_opts);
    ScaleResult r;
    r.name = opt.name;
    r.total_s = net.total_s;
    r.speedup = base_net.total_s / net.total_s;
    r.bottleneck_layers = net.bottleneck_layers;
    study.options.push_back(std::move(r));
  }
  return study;
}

}  // namespace convperf
