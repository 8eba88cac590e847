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

#include <gtest/gtest.h>

#include "convperf/networks.hpp"
#include "convperf/presets.hpp"
#include "convperf/scaling.hpp"

namespace convperf {
namespace {

TEST(DesignOption, ValidateRejectsBadMultipliers) {
  DesignOption opt;
  EXPECT_NO_THROW(opt.validate());
  opt.dram_bw = 0.0;
  EXPECT_THROW(opt.validate(), ValidationError);
  opt.dram_bw = 1.0;
  opt.cta_tile_hw = 192;
  EXPECT_THROW(opt.validate(), ValidationError);
}

TEST(ApplyOption, ScalesTheRightFields) {
  GpuSpec base = preset_device("titan-xp");
  DesignOption opt;
  opt.name = "x";
  opt.n_sm = 4.0;
  opt.l2_bw = 4.0;
  opt.dram_bw = 4.0;
  GpuSpec g = apply_option(base, opt);
  EXPECT_EQ(g.name, "titan-xp+x");
  EXPECT_EQ(g.num_sm, 120);
  EXPECT_EQ(g.mac_per_sec, base.mac_per_sec * 4.0);  // SMs carry math pipes
  EXPECT_EQ(g.l2_bw, base.l2_bw * 4.0);
  EXPECT_EQ(g.dram_bw, base.dram_bw * 4.0);
  // Per-SM resources stay untouched, as does the L2 capacity.
  EXPECT_EQ(g.reg_bytes_per_sm, base.reg_bytes_per_sm);
  EXPECT_EQ(g.smem_bytes_per_sm, base.smem_bytes_per_sm);
  EXPECT_EQ(g.l1_bw_per_sm, base.l1_bw_per_sm);
  EXPECT_EQ(g.l2_bytes, base.l2_bytes);
  EXPECT_EQ(g.core_clock_hz, base.core_clock_hz);
}

TEST(ApplyOption, PerSmMathMultiplierLeavesSmCount) {
  GpuSpec base = preset_device("titan-xp");
  DesignOption opt;
  opt.name = "fatsm";
  opt.mac_bw_per_sm = 2.0;
  GpuSpec g = apply_option(base, opt);
  EXPECT_EQ(g.num_sm, base.num_sm);
  EXPECT_EQ(g.mac_per_sec, base.mac_per_sec * 2.0);
}

TEST(ApplyOption, FractionalAndDegenerateSmCounts) {
  GpuSpec base = preset_device("titan-xp");
  DesignOption opt;
  opt.name = "half";
  opt.n_sm = 0.5;
  EXPECT_EQ(apply_option(base, opt).num_sm, 15);
  opt.n_sm = 0.01;  // rounds to zero SMs
  EXPECT_THROW((void)apply_option(base, opt), ValidationError);
}

TEST(RunScaleStudy, BaselineAndOptionBookkeeping) {
  GpuSpec dev = preset_device("titan-xp");
  auto layers = network_layers("resnet152");
  auto options = preset_design_options();
  ScaleStudy st = run_scale_study(layers, dev, options);
  EXPECT_EQ(st.baseline.name, "titan-xp");
  EXPECT_EQ(st.baseline.speedup, 1.0);
  ASSERT_EQ(st.options.size(), options.size());
  for (size_t i = 0; i < options.size(); ++i) {
    EXPECT_EQ(st.options[i].name, options[i].name);
    EXPECT_EQ(st.options[i].speedup,
              st.baseline.total_s / st.options[i].total_s);
    EXPECT_GT(st.options[i].speedup, 1.0) << options[i].name;
    int layer_count = 0;
    for (int c : st.options[i].bottleneck_layers) layer_count += c;
    EXPECT_EQ(layer_count, static_cast<int>(layers.size()));
  }
}

TEST(RunScaleStudy, WideTileOptionsUseWideTiling) {
  // The upper ladder options select 256-wide CTA tiles; spot-check that the
  // study actually estimates under that tiling.
  GpuSpec dev = preset_device("titan-xp");
  auto options = preset_design_options();
  ASSERT_EQ(options[8].cta_tile_hw, 256);
  GpuSpec scaled = apply_option(dev, options[8]);
  EstimateOptions opts;
  opts.tile_hw = options[8].cta_tile_hw;
  LayerEstimate e = estimate_layer(network_layers("resnet152")[0], scaled, opts);
  EXPECT_EQ(e.tiling.cta_m, 256);
}

}  // namespace
}  // namespace convperf
