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

#include <optional>
#include <string>

#include "convperf/conv_layer.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// CTA tiling
// ---------------------------------------------------------------------------
// One CTA computes a cta_m x cta_n output tile, marching over K in cta_k
// chunks (the GEMM main loop). Warps split the tile into warp_m x warp_n
// sub-tiles; the warp tiles must cover the CTA tile exactly.

struct CtaTiling {
  int64_t cta_m = 128;
  int64_t cta_n = 128;
  int64_t cta_k = 8;
  int64_t warp_m = 64;
  int64_t warp_n = 32;
  int64_t num_warps = 8;

  void validate() const {
    if (cta_m < 1 || cta_n < 1 || cta_k < 1 || warp_m < 1 || warp_n < 1 ||
        num_warps < 1)
      throw ValidationError("tiling: all tile dimensions must be >= 1");
    if (warp_m * warp_n * num_warps != cta_m * cta_n)
      throw ValidationError(
          "tiling: warp tiles (" + std::to_string(warp_m) + "x" +
          std::to_string(warp_n) + " x " + std::to_string(num_warps) +
          " warps) do not cover the CTA tile " + std::to_string(cta_m) + "x" +
          std::to_string(cta_n));
  }
};

// Default warp sub-tile. GEMM kernels profiled on this generation keep a
// 64x32 warp tile across all CTA tile shapes.
inline constexpr int64_t kWarpTileM = 64;
inline constexpr int64_t kWarpTileN = 32;

// Builds a tiling from CTA dimensions using the default warp split.
[[nodiscard]] inline CtaTiling make_tiling(int64_t cta_m, int64_t cta_n,
                                           int64_t cta_k) {
  CtaTiling t;
  t.cta_m = cta_m;
  t.cta_n = cta_n;
  t.cta_k = cta_k;
  t.warp_m = kWarpTileM;
  t.warp_n = kWarpTileN;
  if (cta_m < 1 || cta_n < 1 || cta_k < 1)
    throw ValidationError("tiling: all tile dimensions must be >= 1");
  if ((cta_m * cta_n) % (kWarpTileM * kWarpTileN) != 0)
    throw ValidationError("tiling: " + std::to_string(cta_m) + "x" +
                          std::to_string(cta_n) +
                          " is not coverable by 64x32 warp tiles");
  t.num_warps = (cta_m * cta_n) / (kWarpTileM * kWarpTileN);
  t.validate();
  return t;
}

// Tile selection mirrors the library kernels this model was fitted against:
// narrow output-channel counts pick narrow tiles to limit ceil waste, and the
// K chunk is 8 for the wide tile, 4 otherwise.
//   out_channels <= 32  -> (128 x 32) x 4
//   out_channels <= 64  -> (128 x 64) x 4
//   otherwise           -> (128 x 128) x 8
// `tile_hw` lifts the tile height and the width cap (used by the resource
// scaling study, which evaluates 256x256 CTA tiles).
[[nodiscard]] inline CtaTiling select_tiling(
    int64_t out_channels, std::optional<CtaTiling> override = std::nullopt,
    int64_t tile_hw = 128) {
  if (override) {
    override->validate();
    return *override;
  }
  if (out_channels < 1)
    throw ValidationError("select_tiling: out_channels must be >= 1");
  if (tile_hw != 128 && tile_hw != 256)
    throw ValidationError("select_tiling: tile_hw must be 128 or 256");
  int64_t n;
  if (out_channels <= 32)
    n = 32;
  else if (out_channels <= 64)
    n = 64;
  else if (out_channels <= 128)
    n = 128;
  else
    n = tile_hw;
  int64_t k = n >= 128 ? 8 : 4;
  return make_tiling(tile_hw, n, k);
}

// ---------------------------------------------------------------------------
// Launch geometry
// ---------------------------------------------------------------------------
// CTA grid for a GEMM shape. Edge tiles count as full tiles: the kernel
// launches them and predication only trims the stores.

struct LaunchGeometry {
  int64_t grid_rows = 0;  // ceil(M / cta_m)
  int64_t grid_cols = 0;  // ceil(N / cta_n)
  int64_t num_cta = 0;
  int64_t num_loops = 0;  // ceil(K / cta_k) main-loop iterations
};

[[nodiscard]] inline int64_t ceil_div(int64_t a, int64_t b) {
  return (a + b - 1) / b;
}

[[nodiscard]] inline LaunchGeometry launch_geometry(const GemmShape& shape,
                                                    const CtaTiling& tiling) {
  tiling.validate();
  if (shape.m < 1 || shape.n < 1 || shape.k < 1)
    throw ValidationError("launch_geometry: GEMM dimensions must be >= 1");
  LaunchGeometry g;
  g.grid_rows = ceil_div(shape.m, tiling.cta_m);
  g.grid_cols = ceil_div(shape.n, tiling.cta_n);
  g.num_cta = g.grid_rows * g.grid_cols;
  g.num_loops = ceil_div(shape.k, tiling.cta_k);
  return g;
}

}  // namespace convperf
