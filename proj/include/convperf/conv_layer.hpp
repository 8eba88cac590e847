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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace convperf {

// Raised for invalid layer configs, malformed input files, and bad overrides.
// The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Convolution layer description
// ---------------------------------------------------------------------------
// One conv layer as it reaches the GPU: a mini-batch of BCHW feature maps with
// zero padding materialized around each feature plane. Fully-connected layers
// are expressed as 1x1 convolutions over a 1x1 feature map.

struct ConvLayerConfig {
  std::string name = "layer";
  int64_t batch = 1;         // samples per mini-batch
  int64_t in_channels = 1;
  int64_t in_h = 1;          // feature height, before padding
  int64_t in_w = 1;          // feature width, before padding
  int64_t out_channels = 1;
  int64_t filter_h = 1;
  int64_t filter_w = 1;
  int64_t stride = 1;        // same stride in both dimensions
  int64_t pad = 0;           // zero-pad rows/cols added on each border
  int64_t elem_bytes = 4;    // element size: 2, 4, or 8

  [[nodiscard]] int64_t padded_h() const { return in_h + 2 * pad; }
  [[nodiscard]] int64_t padded_w() const { return in_w + 2 * pad; }

  // 1x1 filters (including FC layers) get dedicated cache/DRAM treatment:
  // every element of an input tile is unique, so the address-range reuse
  // estimates do not apply.
  [[nodiscard]] bool is_pointwise() const {
    return filter_h == 1 && filter_w == 1;
  }

  void validate() const {
    auto fail = [this](const std::string& what) {
      throw ValidationError("layer '" + name + "': " + what);
    };
    if (name.empty()) fail("empty name");
    if (batch < 1) fail("batch must be >= 1");
    if (in_channels < 1 || out_channels < 1) fail("channel counts must be >= 1");
    if (in_h < 1 || in_w < 1) fail("feature dimensions must be >= 1");
    if (filter_h < 1 || filter_w < 1) fail("filter dimensions must be >= 1");
    if (stride < 1) fail("stride must be >= 1");
    if (pad < 0) fail("pad must be >= 0");
    if (elem_bytes != 2 && elem_bytes != 4 && elem_bytes != 8)
      fail("elem_bytes must be 2, 4, or 8");
    if (padded_h() < filter_h || padded_w() < filter_w)
      fail("filter does not fit inside the padded feature");
  }
};

// Output feature dimensions: the filter is placed at every stride-aligned
// position that fits inside the padded feature.
[[nodiscard]] inline std::pair<int64_t, int64_t> output_dims(
    const ConvLayerConfig& cfg) {
  cfg.validate();
  int64_t out_h = (cfg.padded_h() - cfg.filter_h) / cfg.stride + 1;
  int64_t out_w = (cfg.padded_w() - cfg.filter_w) / cfg.stride + 1;
  return {out_h, out_w};
}

// ---------------------------------------------------------------------------
// im2col GEMM lowering
// ---------------------------------------------------------------------------
// The layer runs as OFmap[M x N] = IFmap[M x K] * Filter[K x N] where the
// IFmap matrix is never materialized; addresses are computed on the fly from
// the padded BCHW tensor.

struct GemmShape {
  int64_t m = 0;      // batch * out_h * out_w, one row per output position
  int64_t n = 0;      // out_channels
  int64_t k = 0;      // in_channels * filter_h * filter_w
  int64_t out_h = 0;
  int64_t out_w = 0;
};

[[nodiscard]] inline GemmShape im2col_shape(const ConvLayerConfig& cfg) {
  auto [out_h, out_w] = output_dims(cfg);
  GemmShape s;
  s.out_h = out_h;
  s.out_w = out_w;
  s.m = cfg.batch * out_h * out_w;
  s.n = cfg.out_channels;
  s.k = cfg.in_channels * cfg.filter_h * cfg.filter_w;
  return s;
}

// Cached index math for the hot enumeration paths. address() maps a GEMM
// (row, col) to the element offset inside the padded BCHW tensor:
//   row -> (sample, output row, output col), col -> (channel, tap row, tap col)
//   offset = ((sample*C + channel)*Hp + (y*stride + tap_y))*Wp + x*stride + tap_x
// Addresses are element offsets; multiply by elem_bytes for bytes.
struct Im2colIndexer {
  int64_t in_channels, filter_h, filter_w, stride;
  int64_t hp, wp;            // padded feature dims
  int64_t out_h, out_w;
  int64_t taps;              // filter_h * filter_w
  int64_t hw_out;            // out_h * out_w
  int64_t plane;             // hp * wp
  GemmShape shape;

  explicit Im2colIndexer(const ConvLayerConfig& cfg)
      : in_channels(cfg.in_channels),
        filter_h(cfg.filter_h),
        filter_w(cfg.filter_w),
        stride(cfg.stride),
        hp(cfg.padded_h()),
        wp(cfg.padded_w()),
        taps(cfg.filter_h * cfg.filter_w),
        plane(cfg.padded_h() * cfg.padded_w()),
        shape(im2col_shape(cfg)) {
    out_h = shape.out_h;
    out_w = shape.out_w;
    hw_out = out_h * out_w;
  }

  [[nodiscard]] int64_t address(int64_t row, int64_t col) const {
    int64_t sample = row / hw_out;
    int64_t pos = row % hw_out;
    int64_t y = pos / out_w;
    int64_t x = pos % out_w;
    int64_t channel = col / taps;
    int64_t tap = col % taps;
    int64_t tap_y = tap / filter_w;
    int64_t tap_x = tap % filter_w;
    return ((sample * in_channels + channel) * hp + (y * stride + tap_y)) * wp +
           (x * stride + tap_x);
  }

  // Total element count of the padded input tensor; every address is below it.
  [[nodiscard]] int64_t slab_elements(int64_t batch) const {
    return batch * in_channels * plane;
  }
};

// Bounds-checked single-address lookup; the oracles use Im2colIndexer directly.
[[nodiscard]] inline int64_t im2col_address(const ConvLayerConfig& cfg,
                                            int64_t row, int64_t col) {
  Im2colIndexer ix(cfg);
  if (row < 0 || row >= ix.shape.m)
    throw ValidationError("im2col row " + std::to_string(row) +
                          " outside [0, " + std::to_string(ix.shape.m) + ")");
  if (col < 0 || col >= ix.shape.k)
    throw ValidationError("im2col col " + std::to_string(col) +
                          " outside [0, " + std::to_string(ix.shape.k) + ")");
  return ix.address(row, col);
}

// Filter tensor offset for GEMM coordinates (col = output channel, row = K
// index). Filters are stored with each output channel's K elements contiguous,
// so matrix columns are dense and distinct columns sit K elements apart.
[[nodiscard]] inline int64_t filter_address(const GemmShape& shape,
                                            int64_t out_channel,
                                            int64_t k_index) {
  return out_channel * shape.k + k_index;
}

}  // namespace convperf
