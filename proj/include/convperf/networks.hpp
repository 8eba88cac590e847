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

#include "convperf/conv_layer.hpp"
#include "convperf/io.hpp"

namespace convperf {

// ---------------------------------------------------------------------------
// Bundled network layer tables
// ---------------------------------------------------------------------------
// Classic ImageNet classifiers at batch 256, stored in the layer CSV format
// and parsed on demand so the bundled data exercises the regular parser.
// Each distinct convolution shape appears once; repeated blocks (deep
// residual stages, repeated inception branches) are deduplicated. Shapes
// follow the architecture publications:
//   alexnet    Krizhevsky et al., 2012
//   vgg16      Simonyan and Zisserman, 2015 (configuration D)
//   googlenet  Szegedy et al., 2015 (inception table)
//   resnet152  He et al., 2016 (bottleneck stages, stride on first 1x1)

inline constexpr const char* kNetworkAlexNet = R"(name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad
conv1,256,3,227,227,96,11,11,4,0
conv2,256,96,27,27,256,5,5,1,2
conv3,256,256,13,13,384,3,3,1,1
conv4,256,384,13,13,384,3,3,1,1
conv5,256,384,13,13,256,3,3,1,1
)";

inline constexpr const char* kNetworkVgg16 = R"(name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad
conv1_1,256,3,224,224,64,3,3,1,1
conv1_2,256,64,224,224,64,3,3,1,1
conv2_1,256,64,112,112,128,3,3,1,1
conv2_2,256,128,112,112,128,3,3,1,1
conv3_1,256,128,56,56,256,3,3,1,1
conv3_2,256,256,56,56,256,3,3,1,1
conv4_1,256,256,28,28,512,3,3,1,1
conv4_2,256,512,28,28,512,3,3,1,1
conv5_1,256,512,14,14,512,3,3,1,1
)";

inline constexpr const char* kNetworkGoogLeNet = R"(name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad
conv1_7x7,256,3,224,224,64,7,7,2,3
conv2_reduce,256,64,56,56,64,1,1,1,0
conv2_3x3,256,64,56,56,192,3,3,1,1
i3a_1x1,256,192,28,28,64,1,1,1,0
i3a_3x3_reduce,256,192,28,28,96,1,1,1,0
i3a_3x3,256,96,28,28,128,3,3,1,1
i3a_5x5_reduce,256,192,28,28,16,1,1,1,0
i3a_5x5,256,16,28,28,32,5,5,1,2
i3a_pool_proj,256,192,28,28,32,1,1,1,0
i3b_1x1,256,256,28,28,128,1,1,1,0
i3b_3x3,256,128,28,28,192,3,3,1,1
i3b_5x5_reduce,256,256,28,28,32,1,1,1,0
i3b_5x5,256,32,28,28,96,5,5,1,2
i3b_pool_proj,256,256,28,28,64,1,1,1,0
i4a_1x1,256,480,14,14,192,1,1,1,0
i4a_3x3_reduce,256,480,14,14,96,1,1,1,0
i4a_3x3,256,96,14,14,208,3,3,1,1
i4a_5x5_reduce,256,480,14,14,16,1,1,1,0
i4a_5x5,256,16,14,14,48,5,5,1,2
i4a_pool_proj,256,480,14,14,64,1,1,1,0
i4b_1x1,256,512,14,14,160,1,1,1,0
i4b_3x3_reduce,256,512,14,14,112,1,1,1,0
i4b_3x3,256,112,14,14,224,3,3,1,1
i4b_5x5_reduce,256,512,14,14,24,1,1,1,0
i4b_5x5,256,24,14,14,64,5,5,1,2
i4b_pool_proj,256,512,14,14,64,1,1,1,0
i4c_1x1,256,512,14,14,128,1,1,1,0
i4c_3x3,256,128,14,14,256,3,3,1,1
i4d_3x3_reduce,256,512,14,14,144,1,1,1,0
i4d_3x3,256,144,14,14,288,3,3,1,1
i4d_5x5_reduce,256,512,14,14,32,1,1,1,0
i4d_5x5,256,32,14,14,64,5,5,1,2
i4e_1x1,256,528,14,14,256,1,1,1,0
i4e_3x3_reduce,256,528,14,14,160,1,1,1,0
i4e_3x3,256,160,14,14,320,3,3,1,1
i4e_5x5_reduce,256,528,14,14,32,1,1,1,0
i4e_5x5,256,32,14,14,128,5,5,1,2
i4e_pool_proj,256,528,14,14,128,1,1,1,0
i5a_1x1,256,832,7,7,256,1,1,1,0
i5a_3x3_reduce,256,832,7,7,160,1,1,1,0
i5a_3x3,256,160,7,7,320,3,3,1,1
i5a_5x5_reduce,256,832,7,7,32,1,1,1,0
i5a_5x5,256,32,7,7,128,5,5,1,2
i5a_pool_proj,256,832,7,7,128,1,1,1,0
i5b_1x1,256,832,7,7,384,1,1,1,0
i5b_3x3_reduce,256,832,7,7,192,1,1,1,0
i5b_3x3,256,192,7,7,384,3,3,1,1
i5b_5x5_reduce,256,832,7,7,48,1,1,1,0
i5b_5x5,256,48,7,7,128,5,5,1,2
)";

inline constexpr const char* kNetworkResNet152 = R"(name,B,C_i,H_i,W_i,C_o,H_f,W_f,Strd,Pad
conv1,256,3,224,224,64,7,7,2,3
conv2_reduce_first,256,64,56,56,64,1,1,1,0
conv2_3x3,256,64,56,56,64,3,3,1,1
conv2_expand,256,64,56,56,256,1,1,1,0
conv2_reduce,256,256,56,56,64,1,1,1,0
conv3_reduce_first,256,256,56,56,128,1,1,2,0
conv3_3x3,256,128,28,28,128,3,3,1,1
conv3_expand,256,128,28,28,512,1,1,1,0
conv3_proj,256,256,56,56,512,1,1,2,0
conv3_reduce,256,512,28,28,128,1,1,1,0
conv4_reduce_first,256,512,28,28,256,1,1,2,0
conv4_3x3,256,256,14,14,256,3,3,1,1
conv4_expand,256,256,14,14,1024,1,1,1,0
conv4_proj,256,512,28,28,1024,1,1,2,0
conv4_reduce,256,1024,14,14,256,1,1,1,0
conv5_reduce_first,256,1024,14,14,512,1,1,2,0
conv5_3x3,256,512,7,7,512,3,3,1,1
conv5_expand,256,512,7,7,2048,1,1,1,0
conv5_proj,256,1024,14,14,2048,1,1,2,0
conv5_reduce,256,2048,7,7,512,1,1,1,0
)";

[[nodiscard]] inline std::vector<std::string> network_names() {
  return {"alexnet", "vgg16", "googlenet", "resnet152"};
}

[[nodiscard]] inline const char* network_text(const std::string& name) {
  if (name == "alexnet") return kNetworkAlexNet;
  if (name == "vgg16") return kNetworkVgg16;
  if (name == "googlenet") return kNetworkGoogLeNet;
  if (name == "resnet152") return kNetworkResNet152;
  throw ValidationError("unknown network preset '" + name + "'");
}

[[nodiscard]] inline std::vector<ConvLayerConfig> network_layers(
    const std::string& name) {
  return parse_layer_csv_text(network_text(name), "preset:" + name);
}

// Reference benchmark layer for parameter sweeps: a mid-network 3x3 stage
// whose batch, channel, and feature dimensions are each worth varying.
[[nodiscard]] inline ConvLayerConfig baseline_layer() {
  ConvLayerConfig cfg;
  cfg.name = "baseline";
  cfg.batch = 256;
  cfg.in_channels = 256;
  cfg.in_h = 13;
  cfg.in_w = 13;
  cfg.out_channels = 128;
  cfg.filter_h = 3;
  cfg.filter_w = 3;
  cfg.stride = 1;
  cfg.pad = 1;
  return cfg;
}

}  // namespace convperf
