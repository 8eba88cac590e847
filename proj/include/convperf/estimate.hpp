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
#include <cstdint>
#include <optional>
#include <vector>

#include "convperf/conv_layer.hpp"
#include "convperf/gpu_spec.hpp"
#include "convperf/perf.hpp"
#include "convperf/tiling.hpp"
#include "convperf/traffic.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Whole-layer estimation pipeline
// ---------------------------------------------------------------------------

struct EstimateOptions {
  std::optional<CtaTiling> tile_override;
  std::optional<int64_t> act_cta_override;
  std::optional<double> fixed_miss_rate;
  std::optional<int64_t> coalesce_override;   // bytes per L1 request
  std::optional<int64_t> batch_override;
  std::optional<int64_t> elem_bytes_override;
  std::optional<double> mli_filter_override;
  int64_t tile_hw = 128;  // CTA tile height/width cap for auto selection
};

struct LayerEstimate {
  ConvLayerConfig cfg;  // as estimated, with overrides applied
  GemmShape shape;
  CtaTiling tiling;
  LaunchGeometry launch;
  TrafficEstimate traffic;
  int64_t act_cta = 0;
  PerfEstimate perf;
};

[[nodiscard]] inline LayerEstimate estimate_layer(
    const ConvLayerConfig& layer, const GpuSpec& gpu,
    const EstimateOptions& opts = {}) {
  gpu.validate();
  LayerEstimate e;
  e.cfg = layer;
  if (opts.batch_override) e.cfg.batch = *opts.batch_override;
  if (opts.elem_bytes_override) e.cfg.elem_bytes = *opts.elem_bytes_override;
  e.cfg.validate();

  e.shape = im2col_shape(e.cfg);
  e.tiling = select_tiling(e.cfg.out_channels, opts.tile_override, opts.tile_hw);
  e.launch = launch_geometry(e.shape, e.tiling);

  L1Granularity gran = gpu.gran;
  if (opts.coalesce_override) gran.coalesce_bytes = *opts.coalesce_override;
  TrafficOptions topts;
  topts.mli_filter_override = opts.mli_filter_override;
  topts.fixed_miss_rate = opts.fixed_miss_rate;
  e.traffic = estimate_traffic(e.cfg, e.shape, e.tiling, e.launch, gran, topts);

  KernelSpec kernel;
  kernel.num_act_cta = opts.act_cta_override;
  e.act_cta = active_ctas(gpu, e.tiling, e.cfg.elem_bytes, kernel);
  e.perf = estimate_time(gpu, e.tiling, e.launch, e.traffic, e.cfg.elem_bytes,
                         e.act_cta);
  return e;
}

// ---------------------------------------------------------------------------
// Whole-network estimation
// ---------------------------------------------------------------------------
// Layers run back to back; network time is the sum of layer times and the
// bottleneck histogram shows where the device spends that time.

struct NetworkEstimate {
  std::vector<LayerEstimate> layers;
  double total_s = 0.0;
  double total_cycles = 0.0;
  std::array<int, kNumBottlenecks> bottleneck_layers{};  // layer counts
  std::array<double, kNumBottlenecks> bottleneck_time_s{};
};

[[nodiscard]] inline NetworkEstimate estimate_network(
    const std::vector<ConvLayerConfig>& layers, const GpuSpec& gpu,
    const EstimateOptions& opts = {}) {
  NetworkEstimate n;
  n.layers.reserve(layers.size());
  for (const auto& layer : layers) {
    LayerEstimate e = estimate_layer(layer, gpu, opts);
    n.total_s += e.perf.total_s;
    n.total_cycles += e.perf.cycles;
    n.bottleneck_layers[static_cast<int>(e.perf.bottleneck)] += 1;
    n.bottleneck_time_s[static_cast<int>(e.perf.bottleneck)] += e.perf.total_s;
    n.layers.push_back(std::move(e));
  }
  return n;
}

}  // namespace convperf
