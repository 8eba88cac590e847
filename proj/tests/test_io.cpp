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

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "convperf/estimate.hpp"
#include "convperf/io.hpp"
#include "convperf/networks.hpp"
#include "convperf/presets.hpp"

namespace convperf {
namespace {

TEST(Format, StableShortestSixDigits) {
  EXPECT_EQ(format_sig6(1.5), "1.5");
  EXPECT_EQ(format_sig6(2.0), "2");
  EXPECT_EQ(format_sig6(2.75), "2.75");
  EXPECT_EQ(format_sig6(1234567.0), "1.23457e+06");
  EXPECT_EQ(format_sig6(0.0012345678), "0.00123457");
  EXPECT_EQ(format_int(-42), "-42");
}

TEST(LayerCsv, RoundTripsBundledNetwork) {
  auto layers = network_layers("googlenet");
  std::ostringstream out;
  write_layer_csv(out, layers);
  auto back = parse_layer_csv_text(out.str(), "<round-trip>");
  ASSERT_EQ(back.size(), layers.size());
  for (size_t i = 0; i < layers.size(); ++i) {
    EXPECT_EQ(back[i].name, layers[i].name);
    EXPECT_EQ(back[i].batch, layers[i].batch);
    EXPECT_EQ(back[i].in_channels, layers[i].in_channels);
    EXPECT_EQ(back[i].in_h, layers[i].in_h);
    EXPECT_EQ(back[i].in_w, layers[i].in_w);
    EXPECT_EQ(back[i].out_channels, layers[i].out_channels);
    EXPECT_EQ(back[i].filter_h, layers[i].filter_h);
    EXPECT_EQ(back[i].filter_w, layers[i].filter_w);
    EXPECT_EQ(back[i].stride, layers[i].stride);
    EXPECT_EQ(back[i].pad, layers[i].pad);
  }
}

TEST(LayerCsv, ErrorsCarrySourceAndLine) {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_layer_csv_text(text, "<buf>");
      FAIL() << "expected ValidationError for: " << text;
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
          << e.what();
    }
  };
  std::string hdr = kLayerCsvHeader;
  expect_fail("bogus,header\nrow\n", "<buf>:1");
  expect_fail(hdr + "\na,1,1,8,8,8\n", "expected 10 fields");
  expect_fail(hdr + "\na,1,1,8,8,8,3,3,one,0\n", "Strd");
  expect_fail(hdr + "\na,256,3,8,8,8,3,3,1,1\n" + "a,256,3,8,8,8,3,3,1,1\n",
              "duplicate layer name");
  expect_fail(hdr + "\na,0,3,8,8,8,3,3,1,1\n", "<buf>:2");
  expect_fail(hdr + "\n", "no layer rows");
  expect_fail("# only comments\n", "no header");
}

TEST(LayerCsv, SkipsCommentsAndBlanks) {
  std::string text = std::string("# leading note\n\n") + kLayerCsvHeader +
                     "\n# mid comment\nconv1,256,3,8,8,8,3,3,1,1\n\n";
  auto layers = parse_layer_csv_text(text, "<buf>");
  ASSERT_EQ(layers.size(), 1u);
  EXPECT_EQ(layers[0].name, "conv1");
}

TEST(LayerCsv, WriteRejectsUnparsableNames) {
  std::vector<ConvLayerConfig> layers(1);
  layers[0] = network_layers("alexnet")[0];
  layers[0].name = "bad,name";
  std::ostringstream out;
  EXPECT_THROW(write_layer_csv(out, layers), ValidationError);
}

TEST(DeviceFile, ParsesPresetText) {
  GpuSpec g = parse_device_text(preset_device_text("p100"), "<p100>");
  EXPECT_EQ(g.name, "p100");
  EXPECT_EQ(g.num_sm, 56);
  EXPECT_EQ(g.core_clock_hz, 1.2e9);
  EXPECT_EQ(g.mac_per_sec, 8602.0e9 / 2.0);
  EXPECT_EQ(g.smem_bytes_per_sm, 64 * 1024);
  EXPECT_EQ(g.l2_bytes, 4 * 1024 * 1024);
  EXPECT_EQ(g.l1_bw_per_sm, 38.1e9);
  EXPECT_EQ(g.lat_smem_s, 19.0 / 1.2e9);
  EXPECT_EQ(g.gran.coalesce_bytes, 128);
  EXPECT_EQ(g.estimated_fields.size(), 6u);
}

TEST(DeviceFile, ErrorsAreSpecific) {
  auto expect_fail = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_device_text(text, "<dev>");
      FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
          << e.what();
    }
  };
  expect_fail("name x\nnum_sm 30\n", "missing");
  std::string full = preset_device_text("titan-xp");
  expect_fail(full + "wheels 4\n", "unknown key");
  expect_fail(full + "num_sm 30\n", "duplicate");
}

TEST(OptionsFile, ParsesPresetLadder) {
  auto opts = parse_options_text(kDesignOptionsText, "<opts>");
  ASSERT_EQ(opts.size(), 9u);
  EXPECT_EQ(opts[0].name, "opt1");
  EXPECT_EQ(opts[1].n_sm, 4.0);
  // Unlisted multipliers stay neutral.
  EXPECT_EQ(opts[0].mac_bw_per_sm, 1.0);
  EXPECT_EQ(opts[0].smem_size, 1.0);
  // The last options use the wide CTA tile.
  EXPECT_EQ(opts[8].cta_tile_hw, 256);
  EXPECT_EQ(opts[0].cta_tile_hw, 128);
}

TEST(OptionsFile, ErrorsAreSpecific) {
  try {
    (void)parse_options_text("n_sm 2\n", "<opts>");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("option"), std::string::npos);
  }
}

TEST(EstimateCsv, PinnedColumns) {
  EXPECT_EQ(csv_header(),
            "name,m,n,k,cta_m,cta_n,cta_k,mli_ifmap,mli_filter,l1_bytes,"
            "l2_bytes,dram_bytes,cycles,time_s,bottleneck,case");
  LayerEstimate e =
      estimate_layer(baseline_layer(), preset_device("titan-xp"));
  std::string row = csv_row(e);
  auto fields = detail::split(row, ',');
  ASSERT_EQ(fields.size(), 16u);
  EXPECT_EQ(std::string(fields[0]), "baseline");
  EXPECT_EQ(std::string(fields[1]), format_int(e.shape.m));
  EXPECT_EQ(std::string(fields[4]), "128");
  EXPECT_EQ(std::string(fields[7]), "2");     // mli_ifmap
  EXPECT_EQ(std::string(fields[8]), "2");     // mli_filter
  EXPECT_EQ(std::string(fields[14]), "MAC");
  EXPECT_EQ(std::string(fields[15]), "1");
}

}  // namespace
}  // namespace convperf
