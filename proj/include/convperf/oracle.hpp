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
#include <stdexcept>
#include <string>
#include <vector>

#include "convperf/conv_layer.hpp"
#include "convperf/tiling.hpp"
#include "convperf/traffic.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Brute-force address-stream oracle
// ---------------------------------------------------------------------------
// Ground truth for the analytical traffic model: enumerate the exact address
// stream the im2col GEMM issues and count transactions or unique touches
// directly. Nothing here reuses the closed-form estimates; only the address
// mapping itself is shared, since it defines the workload.

inline constexpr int64_t kDefaultOracleCap = 100'000'000;

// Raised when an enumeration would exceed its element-visit budget. The CLI
// maps it to exit code 2.
class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_oracle_cap(int64_t visits, int64_t cap,
                             const char* what) {
  if (visits > cap)
    throw OracleCapExceeded(std::string(what) + " enumeration needs " +
                            std::to_string(visits) + " element visits, cap " +
                            std::to_string(cap));
}

// ---------------------------------------------------------------------------
// L1 request counting
// ---------------------------------------------------------------------------

// One load stream counted at a fixed request granularity. mli() is the
// overfetch factor against a dense, aligned warp.
struct L1StreamCounts {
  int64_t segments = 0;        // granularity-sized segments actually touched
  int64_t ideal_segments = 0;  // warps * dense aligned segments per warp
  int64_t warps = 0;
  int64_t segment_bytes = 0;

  [[nodiscard]] double mli() const {
    return static_cast<double>(segments) /
           static_cast<double>(ideal_segments);
  }
  [[nodiscard]] double bytes() const {
    return static_cast<double>(segments) * static_cast<double>(segment_bytes);
  }
};

namespace detail {

// Counts distinct aligned segments touched by a monotone non-decreasing
// address run. `begin/end` bound element addresses; the byte stream is
// elem_bytes per element shifted by phase_bytes.
class SegmentCounter {
 public:
  SegmentCounter(int64_t segment_bytes, int64_t elem_bytes,
                 int64_t phase_bytes)
      : segment_bytes_(segment_bytes),
        elem_bytes_(elem_bytes),
        phase_bytes_(phase_bytes) {}

  void visit(int64_t elem_addr) {
    int64_t first = (elem_addr * elem_bytes_ + phase_bytes_) / segment_bytes_;
    int64_t last =
        (elem_addr * elem_bytes_ + phase_bytes_ + elem_bytes_ - 1) /
        segment_bytes_;
    if (count_ == 0 || first > last_seen_) {
      count_ += last - first + 1;
    } else if (last > last_seen_) {
      count_ += last - last_seen_;
    }
    if (count_ > 0) last_seen_ = std::max(last_seen_, last);
  }

  [[nodiscard]] int64_t count() const { return count_; }

 private:
  int64_t segment_bytes_, elem_bytes_, phase_bytes_;
  int64_t count_ = 0;
  int64_t last_seen_ = -1;
};

}  // namespace detail

// IFmap-matrix load stream: each warp serves 32 consecutive GEMM rows of one
// im2col column, counted in coalesce-sized requests. Addresses within such a
// warp are strictly increasing, so a single pass per warp suffices.
// phase_bytes shifts the tensor base against request alignment.
[[nodiscard]] inline L1StreamCounts oracle_l1_ifmap(
    const ConvLayerConfig& cfg, const L1Granularity& gran,
    int64_t phase_bytes = 0, int64_t cap = kDefaultOracleCap) {
  cfg.validate();
  gran.validate();
  Im2colIndexer ix(cfg);
  check_oracle_cap(ix.shape.m * ix.shape.k, cap, "l1 ifmap");

  L1StreamCounts out;
  out.segment_bytes = gran.coalesce_bytes;
  int64_t dense_bytes = 32 * cfg.elem_bytes;
  int64_t ideal_per_warp =
      (dense_bytes + gran.coalesce_bytes - 1) / gran.coalesce_bytes;
  for (int64_t col = 0; col < ix.shape.k; ++col) {
    for (int64_t row0 = 0; row0 < ix.shape.m; row0 += 32) {
      int64_t row_end = std::min<int64_t>(row0 + 32, ix.shape.m);
      detail::SegmentCounter seg(gran.coalesce_bytes, cfg.elem_bytes,
                                 phase_bytes);
      for (int64_t row = row0; row < row_end; ++row) seg.visit(ix.address(row, col));
      out.segments += seg.count();
      out.ideal_segments += ideal_per_warp;
      ++out.warps;
    }
  }
  return out;
}

// Filter-matrix load stream: each warp serves a 32-element slice of the
// cta_n x cta_k filter sub-tile, laid out K-fastest, i.e. 32/cta_k columns of
// cta_k contiguous elements sitting K elements apart. Counted in sector
// transactions; addresses within a warp increase monotonically.
[[nodiscard]] inline L1StreamCounts oracle_l1_filter(
    int64_t n, int64_t k, int64_t cta_k, int64_t elem_bytes,
    const L1Granularity& gran, int64_t phase_bytes = 0,
    int64_t cap = kDefaultOracleCap) {
  gran.validate();
  if (n < 1 || k < 1 || cta_k < 1 || cta_k > 32)
    throw ValidationError("oracle_l1_filter: bad matrix or chunk dimensions");
  check_oracle_cap(n * k, cap, "l1 filter");

  L1StreamCounts out;
  out.segment_bytes = gran.sector_bytes;
  int64_t dense_bytes = 32 * elem_bytes;
  int64_t ideal_per_warp =
      (dense_bytes + gran.sector_bytes - 1) / gran.sector_bytes;
  int64_t cols_per_warp = std::max<int64_t>(32 / cta_k, 1);
  for (int64_t k0 = 0; k0 < k; k0 += cta_k) {
    int64_t k_end = std::min(k0 + cta_k, k);
    for (int64_t n0 = 0; n0 < n; n0 += cols_per_warp) {
      int64_t n_end = std::min(n0 + cols_per_warp, n);
      detail::SegmentCounter seg(gran.sector_bytes, elem_bytes, phase_bytes);
      for (int64_t col = n0; col < n_end; ++col)
        for (int64_t kk = k0; kk < k_end; ++kk) seg.visit(col * k + kk);
      out.segments += seg.count();
      out.ideal_segments += ideal_per_warp;
      ++out.warps;
    }
  }
  return out;
}

// Filter MLI averaged over every base-alignment phase the smallest supported
// element size can realize, matching the analytical alignment average.
[[nodiscard]] inline double oracle_l1_filter_phase_mean(
    int64_t n, int64_t k, int64_t cta_k, int64_t elem_bytes,
    const L1Granularity& gran, int64_t cap = kDefaultOracleCap) {
  double sum = 0.0;
  int64_t phases = 0;
  for (int64_t p = 0; p < gran.sector_bytes; p += kAlignmentPhaseStep) {
    sum += oracle_l1_filter(n, k, cta_k, elem_bytes, gran, p, cap).mli();
    ++phases;
  }
  return sum / static_cast<double>(phases);
}

// ---------------------------------------------------------------------------
// L2 unique-touch counting
// ---------------------------------------------------------------------------

// Unique addresses one CTA requests during one main-loop iteration, the
// ground truth for the per-loop L2 traffic estimate. Filter addresses
// (col*K + kk over distinct columns and rows) are pairwise distinct by
// construction, so their unique count is the clipped sub-tile size.
struct L2TileCounts {
  int64_t ifmap_unique = 0;
  int64_t filter_unique = 0;
  [[nodiscard]] int64_t total() const { return ifmap_unique + filter_unique; }
};

namespace detail {

// Epoch-stamped first-touch marks over an address window: bumping the epoch
// invalidates every mark without clearing the vector.
struct TouchMarks {
  std::vector<int32_t> stamp;
  int32_t epoch = 0;
  int64_t base = 0;

  void reset(int64_t window_base, int64_t window_size) {
    base = window_base;
    if (stamp.size() < static_cast<size_t>(window_size))
      stamp.assign(static_cast<size_t>(window_size), 0);
    if (++epoch == 0) {  // wrapped; wipe stale stamps
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
  }
  bool touch(int64_t addr) {
    size_t at = static_cast<size_t>(addr - base);
    if (stamp[at] == epoch) return false;
    stamp[at] = epoch;
    return true;
  }
};

}  // namespace detail

[[nodiscard]] inline L2TileCounts oracle_l2_tile(const Im2colIndexer& ix,
                                                 const CtaTiling& tiling,
                                                 int64_t tile_row,
                                                 int64_t tile_col, int64_t loop,
                                                 detail::TouchMarks& marks) {
  int64_t row0 = tile_row * tiling.cta_m;
  int64_t row_end = std::min(row0 + tiling.cta_m, ix.shape.m);
  int64_t col0 = tile_col * tiling.cta_n;
  int64_t col_end = std::min(col0 + tiling.cta_n, ix.shape.n);
  int64_t k0 = loop * tiling.cta_k;
  int64_t k_end = std::min(k0 + tiling.cta_k, ix.shape.k);
  if (row0 >= row_end || col0 >= col_end || k0 >= k_end)
    throw ValidationError("oracle_l2_tile: tile outside the launch grid");

  // address() increases monotonically in both row and column, so the tile's
  // footprint lies in one known window; marking only that window keeps the
  // scratch size near the tile size instead of the whole input tensor.
  int64_t lo = ix.address(row0, k0);
  int64_t hi = ix.address(row_end - 1, k_end - 1);
  marks.reset(lo, hi - lo + 1);

  L2TileCounts c;
  for (int64_t row = row0; row < row_end; ++row)
    for (int64_t kk = k0; kk < k_end; ++kk)
      if (marks.touch(ix.address(row, kk))) ++c.ifmap_unique;
  c.filter_unique = (col_end - col0) * (k_end - k0);
  return c;
}

// Self-contained single-tile probe for tests.
[[nodiscard]] inline L2TileCounts oracle_l2_tile(const ConvLayerConfig& cfg,
                                                 const CtaTiling& tiling,
                                                 int64_t tile_row,
                                                 int64_t tile_col,
                                                 int64_t loop) {
  cfg.validate();
  tiling.validate();
  Im2colIndexer ix(cfg);
  detail::TouchMarks marks;
  return oracle_l2_tile(ix, tiling, tile_row, tile_col, loop, marks);
}

struct L2OracleSummary {
  double mean_elements_per_loop = 0.0;
  int64_t samples = 0;  // (tile, loop) pairs enumerated
};

// Mean unique elements per (tile, loop) pair over every loop of up to
// max_tiles tiles, spread across the grid deterministically. One tile
// already covers the model's view (the estimate is tile-position agnostic);
// more tiles average in edge effects.
[[nodiscard]] inline L2OracleSummary oracle_l2(
    const ConvLayerConfig& cfg, const CtaTiling& tiling, int64_t max_tiles = 2,
    int64_t cap = kDefaultOracleCap) {
  cfg.validate();
  tiling.validate();
  if (max_tiles < 1) throw ValidationError("oracle_l2: max_tiles must be >= 1");
  Im2colIndexer ix(cfg);
  LaunchGeometry launch = launch_geometry(ix.shape, tiling);

  std::vector<std::pair<int64_t, int64_t>> tiles;
  int64_t total_tiles = launch.num_cta;
  int64_t take = std::min(max_tiles, total_tiles);
  for (int64_t i = 0; i < take; ++i) {
    // Even spread over the row-major tile order, always including tile 0.
    int64_t flat = i * total_tiles / take;
    tiles.emplace_back(flat / launch.grid_cols, flat % launch.grid_cols);
  }
  check_oracle_cap(
      take * launch.num_loops * (tiling.cta_m + tiling.cta_n) * tiling.cta_k,
      cap, "l2 tile");

  detail::TouchMarks marks;
  int64_t total = 0;
  int64_t samples = 0;
  for (auto [tr, tc] : tiles) {
    for (int64_t loop = 0; loop < launch.num_loops; ++loop) {
      total += oracle_l2_tile(ix, tiling, tr, tc, loop, marks).total();
      ++samples;
    }
  }
  L2OracleSummary s;
  s.samples = samples;
  s.mean_elements_per_loop =
      static_cast<double>(total) / static_cast<double>(samples);
  return s;
}

// ---------------------------------------------------------------------------
// DRAM stream counting
// ---------------------------------------------------------------------------

struct DramOracleResult {
  int64_t visited_elements = 0;  // distinct input elements any column reads
  int64_t slab_elements = 0;     // streaming-slab convention for this layer
  int64_t load_bytes = 0;        // elem * (slab * grid_cols + filter size)
};

// Enumerates the distinct input elements the im2col matrix reads. Every
// (sample, channel) plane sees the identical tap/output pattern, so one
// padded plane is enumerated and scaled by batch * channels. The byte count
// follows the streaming convention the analytical model uses: each grid
// column of CTAs streams the input slab once, the filter loads once.
[[nodiscard]] inline DramOracleResult oracle_dram(
    const ConvLayerConfig& cfg, const CtaTiling& tiling,
    int64_t cap = kDefaultOracleCap) {
  cfg.validate();
  tiling.validate();
  Im2colIndexer ix(cfg);
  LaunchGeometry launch = launch_geometry(ix.shape, tiling);
  int64_t taps = cfg.filter_h * cfg.filter_w;
  check_oracle_cap(taps * ix.out_h * ix.out_w, cap, "dram visited");

  std::vector<char> plane(static_cast<size_t>(ix.plane), 0);
  int64_t plane_unique = 0;
  for (int64_t ty = 0; ty < cfg.filter_h; ++ty)
    for (int64_t tx = 0; tx < cfg.filter_w; ++tx)
      for (int64_t y = 0; y < ix.out_h; ++y)
        for (int64_t x = 0; x < ix.out_w; ++x) {
          int64_t at = (y * cfg.stride + ty) * ix.wp + x * cfg.stride + tx;
          if (!plane[static_cast<size_t>(at)]) {
            plane[static_cast<size_t>(at)] = 1;
            ++plane_unique;
          }
        }

  DramOracleResult r;
  r.visited_elements = plane_unique * cfg.batch * cfg.in_channels;
  r.slab_elements = cfg.is_pointwise() && cfg.stride > 1
                        ? r.visited_elements
                        : ix.slab_elements(cfg.batch);
  r.load_bytes = cfg.elem_bytes * (r.slab_elements * launch.grid_cols +
                                   ix.shape.k * ix.shape.n);
  return r;
}

}  // namespace convperf
