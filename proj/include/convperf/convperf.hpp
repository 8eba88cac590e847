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

// Umbrella header: analytical GPU cache-traffic and execution-time estimation
// for convolution layers lowered to im2col GEMM.

#pragma once

#include "convperf/conv_layer.hpp"
#include "convperf/estimate.hpp"
#include "convperf/gpu_spec.hpp"
#include "convperf/io.hpp"
#include "convperf/networks.hpp"
#include "convperf/oracle.hpp"
#include "convperf/perf.hpp"
#include "convperf/presets.hpp"
#include "convperf/scaling.hpp"
#include "convperf/tiling.hpp"
#include "convperf/traffic.hpp"
