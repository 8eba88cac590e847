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

#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "convperf/conv_layer.hpp"
#include "convperf/tiling.hpp"

namespace convperf {
namespace {

ConvLayerConfig small_layer() {
  ConvLayerConfig cfg;
  cfg.name = "small";
  cfg.batch = 2;
  cfg.in_channels = 2;
  cfg.in_h = 5;
  cfg.in_w = 6;
  cfg.out_channels = 4;
  cfg.filter_h = 3;
  cfg.filter_w = 2;
  cfg.stride = 2;
  cfg.pad = 1;
  return cfg;
}

TEST(ConvLayerConfig, ValidateRejectsBadFields) {
  ConvLayerConfig cfg = small_layer();
  EXPECT_NO_THROW(cfg.validate());

  cfg.elem_bytes = 3;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.elem_bytes = 4;

  cfg.batch = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.batch = 2;

  cfg.filter_w = 9;  // wider than the padded input
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.filter_w = 2;

  cfg.stride = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(ConvLayerConfig, OutputDims) {
  ConvLayerConfig cfg;
  cfg.in_h = cfg.in_w = 13;
  cfg.filter_h = cfg.filter_w = 3;
  cfg.stride = 1;
  cfg.pad = 1;
  auto [oh, ow] = output_dims(cfg);
  EXPECT_EQ(oh, 13);
  EXPECT_EQ(ow, 13);

  cfg.in_h = cfg.in_w = 224;  // large first layer, strided
  cfg.filter_h = cfg.filter_w = 11;
  cfg.stride = 4;
  cfg.pad = 2;
  std::tie(oh, ow) = output_dims(cfg);
  EXPECT_EQ(oh, 55);
  EXPECT_EQ(ow, 55);
}

TEST(ConvLayerConfig, PointwisePredicate) {
  ConvLayerConfig cfg = small_layer();
  EXPECT_FALSE(cfg.is_pointwise());
  cfg.filter_h = cfg.filter_w = 1;
  EXPECT_TRUE(cfg.is_pointwise());
}

TEST(Im2colShape, BaselineGemmDims) {
  ConvLayerConfig cfg;
  cfg.batch = 256;
  cfg.in_channels = 256;
  cfg.in_h = cfg.in_w = 13;
  cfg.out_channels = 128;
  cfg.filter_h = cfg.filter_w = 3;
  cfg.stride = 1;
  cfg.pad = 1;
  GemmShape s = im2col_shape(cfg);
  EXPECT_EQ(s.m, 256 * 13 * 13);
  EXPECT_EQ(s.n, 128);
  EXPECT_EQ(s.k, 256 * 3 * 3);
  EXPECT_EQ(s.out_h, 13);
  EXPECT_EQ(s.out_w, 13);
}

// Reference im2col built the obvious way: walk every output position and
// filter tap and record the padded-input element it reads.
std::vector<std::vector<int64_t>> reference_im2col(const ConvLayerConfig& cfg) {
  GemmShape s = im2col_shape(cfg);
  int64_t hp = cfg.padded_h(), wp = cfg.padded_w();
  std::vector<std::vector<int64_t>> mat(
      static_cast<size_t>(s.m), std::vector<int64_t>(static_cast<size_t>(s.k)));
  int64_t row = 0;
  for (int64_t b = 0; b < cfg.batch; ++b)
    for (int64_t y = 0; y < s.out_h; ++y)
      for (int64_t x = 0; x < s.out_w; ++x, ++row) {
        int64_t col = 0;
        for (int64_t c = 0; c < cfg.in_channels; ++c)
          for (int64_t r = 0; r < cfg.filter_h; ++r)
            for (int64_t q = 0; q < cfg.filter_w; ++q, ++col) {
              int64_t addr = ((b * cfg.in_channels + c) * hp + y * cfg.stride + r) * wp +
                             x * cfg.stride + q;
              mat[static_cast<size_t>(row)][static_cast<size_t>(col)] = addr;
            }
      }
  return mat;
}

TEST(Im2colIndexer, MatchesReferenceMatrix) {
  ConvLayerConfig cfg = small_layer();
  GemmShape s = im2col_shape(cfg);
  Im2colIndexer ix(cfg);
  auto ref = reference_im2col(cfg);
  for (int64_t row = 0; row < s.m; ++row)
    for (int64_t col = 0; col < s.k; ++col)
      ASSERT_EQ(ix.address(row, col),
                ref[static_cast<size_t>(row)][static_cast<size_t>(col)])
          << "row=" << row << " col=" << col;
}

TEST(Im2colIndexer, AddressIsMonotoneInRowAndColumn) {
  ConvLayerConfig cfg = small_layer();
  GemmShape s = im2col_shape(cfg);
  Im2colIndexer ix(cfg);
  for (int64_t col = 0; col < s.k; ++col)
    for (int64_t row = 1; row < s.m; ++row)
      ASSERT_LT(ix.address(row - 1, col), ix.address(row, col));
  for (int64_t row = 0; row < s.m; ++row)
    for (int64_t col = 1; col < s.k; ++col)
      ASSERT_LT(ix.address(row, col - 1), ix.address(row, col));
}

TEST(Im2colIndexer, BoundsChecked) {
  ConvLayerConfig cfg = small_layer();
  GemmShape s = im2col_shape(cfg);
  EXPECT_THROW((void)im2col_address(cfg, -1, 0), ValidationError);
  EXPECT_THROW((void)im2col_address(cfg, 0, s.k), ValidationError);
  EXPECT_THROW((void)im2col_address(cfg, s.m, 0), ValidationError);
}

TEST(Im2colIndexer, SlabElements) {
  ConvLayerConfig cfg = small_layer();
  Im2colIndexer ix(cfg);
  EXPECT_EQ(ix.slab_elements(cfg.batch),
            cfg.batch * cfg.in_channels * cfg.padded_h() * cfg.padded_w());
}

TEST(FilterAddress, ColumnsAreContiguous) {
  // Filter matrix element (k, n) lives at n*K + k: each output-channel
  // column is one contiguous K-long run.
  GemmShape shape;
  shape.k = 18;
  EXPECT_EQ(filter_address(shape, 0, 0), 0);
  EXPECT_EQ(filter_address(shape, 0, 17), 17);
  EXPECT_EQ(filter_address(shape, 3, 0), 54);
  EXPECT_EQ(filter_address(shape, 2, 5), 41);
}

TEST(CtaTiling, SelectByOutputChannels) {
  EXPECT_EQ(select_tiling(16).cta_n, 32);
  EXPECT_EQ(select_tiling(32).cta_n, 32);
  EXPECT_EQ(select_tiling(33).cta_n, 64);
  EXPECT_EQ(select_tiling(64).cta_n, 64);
  EXPECT_EQ(select_tiling(96).cta_n, 128);
  EXPECT_EQ(select_tiling(128).cta_n, 128);
  EXPECT_EQ(select_tiling(384).cta_n, 128);
  EXPECT_EQ(select_tiling(384, std::nullopt, 256).cta_n, 256);

  // The wide tile runs the deep K chunk, narrow tiles the shallow one.
  EXPECT_EQ(select_tiling(128).cta_k, 8);
  EXPECT_EQ(select_tiling(64).cta_k, 4);
  EXPECT_EQ(select_tiling(32).cta_k, 4);
  EXPECT_EQ(select_tiling(32).cta_m, 128);
}

TEST(CtaTiling, WarpCoverage) {
  CtaTiling t = select_tiling(128);
  EXPECT_EQ(t.num_warps, 8);  // 128*128 outputs / (64*32 per warp)
  EXPECT_NO_THROW(t.validate());

  EXPECT_EQ(select_tiling(32).num_warps, 2);
  EXPECT_EQ(select_tiling(384, std::nullopt, 256).num_warps, 32);
}

TEST(CtaTiling, MakeTilingRejectsUncoverable) {
  EXPECT_THROW((void)make_tiling(100, 100, 4), ValidationError);
  EXPECT_NO_THROW((void)make_tiling(256, 64, 8));
}

TEST(LaunchGeometry, CountsAndLoops) {
  ConvLayerConfig cfg;
  cfg.batch = 256;
  cfg.in_channels = 256;
  cfg.in_h = cfg.in_w = 13;
  cfg.out_channels = 128;
  cfg.filter_h = cfg.filter_w = 3;
  cfg.stride = 1;
  cfg.pad = 1;
  GemmShape s = im2col_shape(cfg);
  CtaTiling t = select_tiling(cfg.out_channels);
  LaunchGeometry g = launch_geometry(s, t);
  EXPECT_EQ(g.grid_rows, ceil_div(s.m, t.cta_m));
  EXPECT_EQ(g.grid_cols, 1);
  EXPECT_EQ(g.num_cta, g.grid_rows * g.grid_cols);
  EXPECT_EQ(g.num_loops, ceil_div(s.k, t.cta_k));
  EXPECT_EQ(g.num_loops, 288);

  cfg.out_channels = 384;  // three tile columns
  s = im2col_shape(cfg);
  g = launch_geometry(s, select_tiling(cfg.out_channels));
  EXPECT_EQ(g.grid_cols, 3);
}

}  // namespace
}  // namespace convperf
