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
#include <cmath>
#include <optional>
#include <string>

#include "convperf/conv_layer.hpp"
#include "convperf/tiling.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// L1 request granularity
// ---------------------------------------------------------------------------
// A warp's coalesced load is served in aligned requests of coalesce_bytes;
// the memory system moves data in sector_bytes transactions (a sector is the
// smallest slice of a cache line that can be fetched). 128-byte requests match
// profiled Pascal parts; 32-byte requests match later parts.

struct L1Granularity {
  int64_t coalesce_bytes = 128;
  int64_t sector_bytes = 32;

  void validate() const {
    if (coalesce_bytes != 32 && coalesce_bytes != 64 && coalesce_bytes != 128)
      throw ValidationError("l1 granularity: coalesce_bytes must be 32, 64, or 128");
    if (sector_bytes < 1 || coalesce_bytes % sector_bytes != 0)
      throw ValidationError("l1 granularity: sector_bytes must divide coalesce_bytes");
  }
};

// Alignment sweeps step the data-to-line offset by the smallest supported
// element size (2-byte elements), so one sweep covers every alignment any
// tensor can realize regardless of the current element width.
inline constexpr int64_t kAlignmentPhaseStep = 2;

// ---------------------------------------------------------------------------
// L1 traffic
// ---------------------------------------------------------------------------

// Elements fetched per element used when a warp walks one im2col column:
// each output row reads out_w-spaced pixels from a padded_w-wide row, so the
// address rate per used element is padded_w * stride over the covered span.
[[nodiscard]] inline double access_ratio(const ConvLayerConfig& cfg) {
  cfg.validate();
  return static_cast<double>(cfg.padded_w() * cfg.stride) /
         static_cast<double>(cfg.padded_w() - cfg.filter_w + 1);
}

// Memory-level inefficiency of IFmap-matrix loads: requests issued per warp
// over the requests an ideally dense, aligned warp would issue. The ceil
// captures the partially filled trailing request of the strided span.
//
// Validity: the ratio is a one-dimensional, horizontal derivation. It holds
// when a warp's 32 consecutive outputs advance within one output row, or for
// stride 1 where a row wrap lands on the adjacent padded-row address anyway.
// A strided warp that wraps output rows skips stride*padded_w addresses per
// wrap and issues roughly one extra request run per wrapped row, which this
// ratio does not see; expect it to under-report such layers by up to the
// number of rows the warp spans.
[[nodiscard]] inline double mli_ifmap(const ConvLayerConfig& cfg,
                                      const L1Granularity& gran) {
  gran.validate();
  double warp_bytes = static_cast<double>(32 * cfg.elem_bytes);
  double coalesce = static_cast<double>(gran.coalesce_bytes);
  return std::ceil(access_ratio(cfg) * warp_bytes / coalesce) *
         (coalesce / warp_bytes);
}

// Sector count of one contiguous run of `run_bytes`, averaged over all
// alignment phases of the run start within a sector.
[[nodiscard]] inline double mean_sectors_per_run(int64_t run_bytes,
                                                 int64_t sector_bytes) {
  int64_t phases = 0;
  int64_t sectors = 0;
  for (int64_t p = 0; p < sector_bytes; p += kAlignmentPhaseStep) {
    sectors += (p + run_bytes - 1) / sector_bytes + 1;
    ++phases;
  }
  return static_cast<double>(sectors) / static_cast<double>(phases);
}

// Filter-matrix inefficiency for arbitrary K chunks: a warp covers 32/cta_k
// matrix columns, each a cta_k-element contiguous run, and distinct columns
// sit far apart in memory. Counted in sector transactions against the dense
// ideal, averaged over alignment phases.
[[nodiscard]] inline double mli_filter_alignment_average(
    int64_t cta_k, int64_t elem_bytes, const L1Granularity& gran) {
  gran.validate();
  int64_t full_runs = 32 / cta_k;
  int64_t tail = 32 % cta_k;  // a warp may end on a partial column
  double sectors =
      static_cast<double>(full_runs) *
      mean_sectors_per_run(cta_k * elem_bytes, gran.sector_bytes);
  if (tail > 0)
    sectors += mean_sectors_per_run(tail * elem_bytes, gran.sector_bytes);
  double ideal = std::ceil(static_cast<double>(32 * elem_bytes) /
                           static_cast<double>(gran.sector_bytes));
  return sectors / ideal;
}

// Filter-matrix inefficiency. The 128-byte FP32 values for the shipped K
// chunks are profiled constants; every other combination is computed from the
// alignment-averaged sector model above. K chunks wider than a warp need an
// explicit profiled override.
[[nodiscard]] inline double mli_filter(
    int64_t cta_k, int64_t elem_bytes, const L1Granularity& gran,
    std::optional<double> override = std::nullopt) {
  if (override) {
    if (*override < 1.0)
      throw ValidationError("mli_filter override must be >= 1");
    return *override;
  }
  if (cta_k > 32 || 32 % cta_k != 0)
    throw ValidationError(
        "mli_filter: no profiled value for K chunk " + std::to_string(cta_k) +
        " (must divide a 32-thread warp); pass an explicit override");
  if (gran.coalesce_bytes == 128 && elem_bytes == 4) {
    if (cta_k == 8) return 2.0;
    if (cta_k == 4) return 2.75;
  }
  return mli_filter_alignment_average(cta_k, elem_bytes, gran);
}

// Total L1 load bytes for the layer: every GEMM operand element is requested
// once per use, scaled by the matching inefficiency.
[[nodiscard]] inline double l1_traffic_bytes(const GemmShape& shape,
                                             double mli_ifmap_value,
                                             double mli_filter_value,
                                             int64_t elem_bytes) {
  return static_cast<double>(elem_bytes) *
         (static_cast<double>(shape.m) * static_cast<double>(shape.k) *
              mli_ifmap_value +
          static_cast<double>(shape.n) * static_cast<double>(shape.k) *
              mli_filter_value);
}

// ---------------------------------------------------------------------------
// L2 traffic
// ---------------------------------------------------------------------------
// Requests that miss in L1 but hit addresses another warp of the same CTA
// already pulled in do not reach L2 again within a main-loop iteration, so
// per-loop L2 traffic is the unique address range a CTA tile touches.
//
// Validity: the range is a proxy for the unique-element count, so it is
// reliable where tiles touch their range densely: unit stride with the wide
// K chunk (cta_k 8), where it tracks an exhaustive count within ~12%, and
// exactly for 1x1 stride-1 tiles. Strides > 1 leave untouched holes inside
// the range, which inflates the estimate by roughly the stride. The narrow
// K chunk (cta_k 4) under large filters scales the vertical range by
// cta_k / (filter_h*filter_w) and lands well below the true unique count
// (up to ~2x for 11x11 filters).

// Vertical address range one im2col column covers across the cta_m rows of a
// CTA tile (elements). For 1x1 filters every tile element is unique and the
// range degenerates to the tile height.
[[nodiscard]] inline double dist_v(const ConvLayerConfig& cfg,
                                   const CtaTiling& tiling) {
  if (cfg.is_pointwise()) return static_cast<double>(tiling.cta_m);
  return static_cast<double>(tiling.cta_m) * access_ratio(cfg);
}

// Average vertical range per loop: the cta_k columns of one loop share a
// channel's range, and a channel spans filter_h*filter_w columns.
[[nodiscard]] inline double a_dist_v(const ConvLayerConfig& cfg,
                                     const CtaTiling& tiling) {
  if (cfg.is_pointwise())
    return static_cast<double>(tiling.cta_m) * static_cast<double>(tiling.cta_k);
  return dist_v(cfg, tiling) * static_cast<double>(tiling.cta_k) /
         static_cast<double>(cfg.filter_h * cfg.filter_w);
}

struct DistH {
  double value = 0.0;
  bool clamped = false;  // a negative additive term was clamped to zero
};

// Horizontal offset between neighbouring im2col columns of one loop,
// blending the two tap-step cases (step within a filter row vs. wrap to the
// next feature row). Wide K chunks over small filters can drive an additive
// term negative; such terms clamp to zero and the estimate is flagged.
[[nodiscard]] inline DistH dist_h(const ConvLayerConfig& cfg,
                                  const CtaTiling& tiling) {
  DistH d;
  if (cfg.is_pointwise()) {
    d.value = static_cast<double>(tiling.cta_k);
    return d;
  }
  double wp = static_cast<double>(cfg.padded_w());
  double wf = static_cast<double>(cfg.filter_w);
  double strd = static_cast<double>(cfg.stride);
  double bk = static_cast<double>(tiling.cta_k);
  double term1 = (bk - 1.0) / wf * ((wp - wf + 1.0) + strd * (wf - bk + 1.0));
  double term2 = (wf - bk + 1.0) / wf * (strd * (bk - 1.0));
  if (term1 < 0.0) {
    term1 = 0.0;
    d.clamped = true;
  }
  if (term2 < 0.0) {
    term2 = 0.0;
    d.clamped = true;
  }
  d.value = term1 + term2;
  return d;
}

// Horizontal range per loop: the column offset grows with how many feature
// rows the tile's outputs span, approximated by cta_m over the squared output
// height. For 1x1 filters the horizontal term is already absorbed into the
// all-unique tile footprint (height x width), so it contributes zero here.
[[nodiscard]] inline DistH a_dist_h(const ConvLayerConfig& cfg,
                                    const CtaTiling& tiling) {
  if (cfg.is_pointwise()) return {0.0, false};
  DistH d = dist_h(cfg, tiling);
  double rows = static_cast<double>(cfg.padded_h() - cfg.filter_h + 1) /
                static_cast<double>(cfg.stride);
  d.value *= 1.0 + static_cast<double>(tiling.cta_m) / (rows * rows);
  return d;
}

// Unique filter elements per loop: the cta_n x cta_k filter sub-tile, all
// addresses distinct.
[[nodiscard]] inline double dist_filter(const CtaTiling& tiling) {
  return static_cast<double>(tiling.cta_n) * static_cast<double>(tiling.cta_k);
}

// Unique elements one CTA requests from L2 in one main-loop iteration.
[[nodiscard]] inline double l2_elements_per_loop(const ConvLayerConfig& cfg,
                                                 const CtaTiling& tiling) {
  return a_dist_v(cfg, tiling) + a_dist_h(cfg, tiling).value +
         dist_filter(tiling);
}

[[nodiscard]] inline double l2_traffic_bytes(const ConvLayerConfig& cfg,
                                             const CtaTiling& tiling,
                                             const LaunchGeometry& launch) {
  return static_cast<double>(cfg.elem_bytes) * l2_elements_per_loop(cfg, tiling) *
         static_cast<double>(launch.num_loops) *
         static_cast<double>(launch.num_cta);
}

// ---------------------------------------------------------------------------
// DRAM traffic
// ---------------------------------------------------------------------------
// CTAs are scheduled column by column over the grid, so each grid column
// streams the padded input tensor once while the filter tensor is small
// enough to stay resident and loads once in total. A 1x1 filter with stride
// greater than 1 skips input elements entirely; only visited elements load.

[[nodiscard]] inline int64_t dram_ifmap_slab_elements(
    const ConvLayerConfig& cfg, const GemmShape& shape) {
  if (cfg.is_pointwise() && cfg.stride > 1)
    return cfg.batch * shape.out_h * shape.out_w * cfg.in_channels;
  return cfg.batch * cfg.in_channels * cfg.padded_h() * cfg.padded_w();
}

[[nodiscard]] inline double dram_traffic_bytes(const ConvLayerConfig& cfg,
                                               const GemmShape& shape,
                                               const LaunchGeometry& launch) {
  int64_t ifmap = dram_ifmap_slab_elements(cfg, shape) * launch.grid_cols;
  int64_t filter = shape.k * shape.n;
  return static_cast<double>(cfg.elem_bytes) *
         static_cast<double>(ifmap + filter);
}

// Output bytes written back to DRAM, in full-tile units to match the
// epilogue accounting. Loads and stores are reported separately.
[[nodiscard]] inline double dram_write_bytes(const ConvLayerConfig& cfg,
                                             const CtaTiling& tiling,
                                             const LaunchGeometry& launch) {
  return static_cast<double>(cfg.elem_bytes) *
         static_cast<double>(tiling.cta_m) *
         static_cast<double>(tiling.cta_n) *
         static_cast<double>(launch.num_cta);
}

// ---------------------------------------------------------------------------
// Combined estimate
// ---------------------------------------------------------------------------

struct TrafficEstimate {
  double l1_bytes = 0.0;
  double l2_bytes = 0.0;
  double dram_bytes = 0.0;        // loads only
  double dram_store_bytes = 0.0;  // output writeback, reported separately
  // Per-CTA per-main-loop byte volumes, the feed rates of the timing model.
  double l1_bytes_per_loop = 0.0;
  double l2_bytes_per_loop = 0.0;
  double dram_bytes_per_loop = 0.0;
  // Model internals, reported for inspection.
  double mli_ifmap = 0.0;
  double mli_filter = 0.0;
  double dist_v = 0.0;
  double a_dist_v = 0.0;
  double dist_h = 0.0;
  double a_dist_h = 0.0;
  double dist_filter = 0.0;
  bool dist_h_clamped = false;
};

// Optional behaviour switches for the traffic estimate.
struct TrafficOptions {
  std::optional<double> mli_filter_override;
  // Flat-miss-rate mode reproduces simpler models that treat both cache
  // levels as leaky with a fixed rate: L2 sees rate*L1 and DRAM rate^2*L1.
  std::optional<double> fixed_miss_rate;
};

[[nodiscard]] inline TrafficEstimate estimate_traffic(
    const ConvLayerConfig& cfg, const GemmShape& shape,
    const CtaTiling& tiling, const LaunchGeometry& launch,
    const L1Granularity& gran, const TrafficOptions& opts = {}) {
  cfg.validate();
  tiling.validate();
  TrafficEstimate e;
  e.mli_ifmap = mli_ifmap(cfg, gran);
  e.mli_filter =
      mli_filter(tiling.cta_k, cfg.elem_bytes, gran, opts.mli_filter_override);
  e.l1_bytes = l1_traffic_bytes(shape, e.mli_ifmap, e.mli_filter, cfg.elem_bytes);

  e.dist_v = dist_v(cfg, tiling);
  e.a_dist_v = a_dist_v(cfg, tiling);
  DistH dh = dist_h(cfg, tiling);
  DistH adh = a_dist_h(cfg, tiling);
  e.dist_h = dh.value;
  e.a_dist_h = adh.value;
  e.dist_h_clamped = dh.clamped || adh.clamped;
  e.dist_filter = dist_filter(tiling);
  e.l2_bytes = l2_traffic_bytes(cfg, tiling, launch);

  e.dram_bytes = dram_traffic_bytes(cfg, shape, launch);
  e.dram_store_bytes = dram_write_bytes(cfg, tiling, launch);

  double elem = static_cast<double>(cfg.elem_bytes);
  e.l1_bytes_per_loop =
      elem * (static_cast<double>(tiling.cta_m) * tiling.cta_k * e.mli_ifmap +
              static_cast<double>(tiling.cta_n) * tiling.cta_k * e.mli_filter);
  e.l2_bytes_per_loop = elem * l2_elements_per_loop(cfg, tiling);
  e.dram_bytes_per_loop =
      e.dram_bytes / (static_cast<double>(launch.num_cta) *
                      static_cast<double>(launch.num_loops));

  if (opts.fixed_miss_rate) {
    double r = *opts.fixed_miss_rate;
    if (r <= 0.0 || r > 1.0)
      throw ValidationError("fixed miss rate must be in (0, 1]");
    e.l2_bytes = r * e.l1_bytes;
    e.dram_bytes = r * e.l2_bytes;
    e.l2_bytes_per_loop = r * e.l1_bytes_per_loop;
    e.dram_bytes_per_loop = r * e.l2_bytes_per_loop;
  }
  return e;
}

}  // namespace convperf
