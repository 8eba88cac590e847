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

// Command-line front end: estimate cache traffic and execution time of conv
// layers on a described GPU, sweep layer parameters, run the resource
// scaling study, and cross-check the model against the brute-force oracle.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "convperf/convperf.hpp"

namespace {

using namespace convperf;

// ---------------------------------------------------------------------------
// Shared flag bundles
// ---------------------------------------------------------------------------

struct DeviceArgs {
  std::string device = "titan-xp";  // preset name or device file path

  void attach(CLI::App* cmd) {
    cmd->add_option("--device", device,
                    "GPU preset (titan-xp, p100, v100) or device file path")
        ->capture_default_str();
  }

  [[nodiscard]] GpuSpec resolve() const {
    for (const auto& name : preset_device_names())
      if (name == device) return preset_device(name);
    return load_device_file(device);
  }
};

struct ModelArgs {
  std::optional<int64_t> batch;
  std::optional<int64_t> elem_bytes;
  std::optional<int64_t> coalesce;
  std::optional<int64_t> act_cta;
  std::optional<double> fixed_miss_rate;
  std::string tile;  // "MxNxK"
  int64_t tile_hw = 128;

  void attach(CLI::App* cmd) {
    cmd->add_option("--batch", batch, "override mini-batch size");
    cmd->add_option("--elem-bytes", elem_bytes,
                    "element size in bytes (2, 4, or 8)");
    cmd->add_option("--l1-coalesce", coalesce,
                    "L1 request size in bytes (32, 64, or 128)");
    cmd->add_option("--act-cta", act_cta,
                    "override concurrent CTAs per SM");
    cmd->add_option("--fixed-miss-rate", fixed_miss_rate,
                    "flat-miss-rate mode: L2 = r*L1 bytes, DRAM = r*L2 bytes");
    cmd->add_option("--tile", tile, "CTA tile override as MxNxK, e.g. 128x64x4");
    cmd->add_option("--tile-hw", tile_hw,
                    "CTA tile height/width for auto selection (128 or 256)")
        ->capture_default_str();
  }

  [[nodiscard]] EstimateOptions resolve() const {
    EstimateOptions opts;
    opts.batch_override = batch;
    opts.elem_bytes_override = elem_bytes;
    opts.coalesce_override = coalesce;
    opts.act_cta_override = act_cta;
    opts.fixed_miss_rate = fixed_miss_rate;
    opts.tile_hw = tile_hw;
    if (!tile.empty()) {
      int64_t m = 0, n = 0, k = 0;
      char x1 = 0, x2 = 0;
      std::istringstream in(tile);
      in >> m >> x1 >> n >> x2 >> k;
      if (!in || x1 != 'x' || x2 != 'x' || !(in >> std::ws).eof())
        throw ValidationError("--tile expects MxNxK, e.g. 128x64x4");
      opts.tile_override = make_tiling(m, n, k);
    }
    return opts;
  }
};

struct LayerArgs {
  std::string name = "layer";
  int64_t batch = 256;
  int64_t in_channels = 256;
  std::string in_hw = "13";
  int64_t out_channels = 128;
  std::string filter = "3";
  int64_t stride = 1;
  int64_t pad = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--name", name, "layer name")->capture_default_str();
    cmd->add_option("-b,--layer-batch", batch, "mini-batch size")
        ->capture_default_str();
    cmd->add_option("--in-channels", in_channels, "input channels")
        ->capture_default_str();
    cmd->add_option("--in-hw", in_hw, "input feature size, H or HxW")
        ->capture_default_str();
    cmd->add_option("--out-channels", out_channels, "output channels")
        ->capture_default_str();
    cmd->add_option("--filter", filter, "filter size, H or HxW")
        ->capture_default_str();
    cmd->add_option("--stride", stride, "stride")->capture_default_str();
    cmd->add_option("--pad", pad, "zero padding per border")
        ->capture_default_str();
  }

  [[nodiscard]] static std::pair<int64_t, int64_t> parse_hw(
      const std::string& text, const char* what) {
    int64_t h = 0, w = 0;
    char x = 0;
    std::istringstream in(text);
    in >> h;
    if (in && (in >> x)) {
      if (x != 'x' || !(in >> w) || !(in >> std::ws).eof())
        throw ValidationError(std::string(what) + " expects H or HxW");
    } else {
      w = h;
    }
    if (h < 1 || w < 1)
      throw ValidationError(std::string(what) + " expects H or HxW");
    return {h, w};
  }

  [[nodiscard]] ConvLayerConfig resolve() const {
    ConvLayerConfig cfg;
    cfg.name = name;
    cfg.batch = batch;
    cfg.in_channels = in_channels;
    auto [ih, iw] = parse_hw(in_hw, "--in-hw");
    cfg.in_h = ih;
    cfg.in_w = iw;
    cfg.out_channels = out_channels;
    auto [fh, fw] = parse_hw(filter, "--filter");
    cfg.filter_h = fh;
    cfg.filter_w = fw;
    cfg.stride = stride;
    cfg.pad = pad;
    cfg.validate();
    return cfg;
  }
};

[[nodiscard]] std::vector<ConvLayerConfig> resolve_network(
    const std::string& net) {
  for (const auto& name : network_names())
    if (name == net) return network_layers(name);
  return load_layer_csv(net);
}

void print_histogram(std::ostream& out,
                     const std::array<int, kNumBottlenecks>& hist) {
  // Space-separated so the histogram stays one CSV field.
  bool first = true;
  for (int i = 0; i < kNumBottlenecks; ++i) {
    if (hist[i] == 0) continue;
    if (!first) out << ' ';
    out << to_string(static_cast<Bottleneck>(i)) << ":" << hist[i];
    first = false;
  }
  if (first) out << "-";
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

void print_layer_report(std::ostream& out, const LayerEstimate& e) {
  out << "layer            " << e.cfg.name << "\n";
  out << "gemm m,n,k       " << e.shape.m << ", " << e.shape.n << ", "
      << e.shape.k << "\n";
  out << "output h,w       " << e.shape.out_h << ", " << e.shape.out_w << "\n";
  out << "cta tile         " << e.tiling.cta_m << "x" << e.tiling.cta_n << "x"
      << e.tiling.cta_k << " (" << e.tiling.num_warps << " warps of "
      << e.tiling.warp_m << "x" << e.tiling.warp_n << ")\n";
  out << "grid             " << e.launch.grid_rows << "x" << e.launch.grid_cols
      << " CTAs, " << e.launch.num_loops << " main loops, " << e.act_cta
      << " active CTAs/SM\n";
  out << "mli ifmap        " << format_sig6(e.traffic.mli_ifmap) << "\n";
  out << "mli filter       " << format_sig6(e.traffic.mli_filter) << "\n";
  out << "l1 bytes         " << format_sig6(e.traffic.l1_bytes) << "\n";
  out << "l2 bytes         " << format_sig6(e.traffic.l2_bytes);
  if (e.traffic.dist_h_clamped) out << "  (clamped)";
  out << "\n";
  out << "dram bytes       " << format_sig6(e.traffic.dram_bytes)
      << " (+ " << format_sig6(e.traffic.dram_store_bytes) << " stores)\n";
  out << "bytes/loop/cta   l1 " << format_sig6(e.traffic.l1_bytes_per_loop)
      << ", l2 " << format_sig6(e.traffic.l2_bytes_per_loop) << ", dram "
      << format_sig6(e.traffic.dram_bytes_per_loop) << "\n";
  out << "candidates (s)   ";
  for (int i = 0; i < kNumBottlenecks; ++i) {
    if (i) out << ", ";
    out << to_string(static_cast<Bottleneck>(i)) << " "
        << format_sig6(e.perf.candidate_s[i]);
  }
  out << "\n";
  out << "time             " << format_sig6(e.perf.total_s) << " s ("
      << format_sig6(e.perf.cycles) << " cycles)\n";
  out << "bottleneck       " << to_string(e.perf.bottleneck) << " (case "
      << e.perf.timing_case << (e.perf.tie ? ", tie" : "") << ")\n";
}

int run_estimate(const DeviceArgs& dev, const ModelArgs& model,
                 const LayerArgs& layer) {
  GpuSpec gpu = dev.resolve();
  LayerEstimate e = estimate_layer(layer.resolve(), gpu, model.resolve());
  print_layer_report(std::cout, e);
  return 0;
}

// ---------------------------------------------------------------------------
// network
// ---------------------------------------------------------------------------

int run_network(const DeviceArgs& dev, const ModelArgs& model,
                const std::string& net, const std::string& out_path) {
  GpuSpec gpu = dev.resolve();
  NetworkEstimate n = estimate_network(resolve_network(net), gpu,
                                       model.resolve());

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);  // keep '\n' endings everywhere
    if (!file)
      throw ValidationError("cannot open output file '" + out_path + "'");
    out = &file;
  }
  *out << csv_header() << "\n";
  for (const auto& e : n.layers) *out << csv_row(e) << "\n";

  std::cerr << "device " << gpu.name << ", " << n.layers.size()
            << " layers, total " << format_sig6(n.total_s) << " s ("
            << format_sig6(n.total_cycles) << " cycles)\n";
  std::cerr << "bottlenecks: ";
  print_histogram(std::cerr, n.bottleneck_layers);
  std::cerr << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep(const DeviceArgs& dev, const ModelArgs& model,
              const std::string& param, std::vector<int64_t> values) {
  GpuSpec gpu = dev.resolve();
  EstimateOptions opts = model.resolve();
  if (values.empty()) {
    if (param == "b") values = {16, 32, 64, 128, 256, 512};
    else if (param == "hw") values = {7, 14, 28, 56, 112};
    else values = {32, 64, 128, 256, 512, 1024};  // co, ci
  }
  *(&std::cout) << csv_header() << "\n";
  for (int64_t v : values) {
    ConvLayerConfig cfg = baseline_layer();
    if (param == "co") cfg.out_channels = v;
    else if (param == "ci") cfg.in_channels = v;
    else if (param == "hw") cfg.in_h = cfg.in_w = v;
    else if (param == "b") cfg.batch = v;
    else throw ValidationError("--param must be one of co, ci, hw, b");
    cfg.name = "baseline_" + param + format_int(v);
    std::cout << csv_row(estimate_layer(cfg, gpu, opts)) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// scale
// ---------------------------------------------------------------------------

int run_scale(const DeviceArgs& dev, const ModelArgs& model,
              const std::string& net, const std::string& options_path) {
  GpuSpec gpu = dev.resolve();
  std::vector<DesignOption> options = options_path.empty()
                                          ? preset_design_options()
                                          : load_options_file(options_path);
  ScaleStudy study =
      run_scale_study(resolve_network(net), gpu, options, model.resolve());

  std::cout << "option,total_s,speedup,bottlenecks\n";
  auto row = [](const ScaleResult& r) {
    std::cout << r.name << ',' << format_sig6(r.total_s) << ','
              << format_sig6(r.speedup) << ',';
    print_histogram(std::cout, r.bottleneck_layers);
    std::cout << "\n";
  };
  row(study.baseline);
  for (const auto& r : study.options) row(r);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

int run_oracle(const DeviceArgs& dev, const ModelArgs& model,
               const LayerArgs& layer, int64_t cap) {
  GpuSpec gpu = dev.resolve();
  EstimateOptions opts = model.resolve();
  LayerEstimate e = estimate_layer(layer.resolve(), gpu, opts);
  L1Granularity gran = gpu.gran;
  if (opts.coalesce_override) gran.coalesce_bytes = *opts.coalesce_override;

  auto pct = [](double model_v, double oracle_v) {
    return format_sig6((model_v / oracle_v - 1.0) * 100.0) + "%";
  };

  L1StreamCounts ifmap = oracle_l1_ifmap(e.cfg, gran, 0, cap);
  double model_ifmap_bytes = static_cast<double>(e.cfg.elem_bytes) *
                             static_cast<double>(e.shape.m) *
                             static_cast<double>(e.shape.k) *
                             e.traffic.mli_ifmap;
  std::cout << "l1 ifmap bytes   model " << format_sig6(model_ifmap_bytes)
            << ", oracle " << format_sig6(ifmap.bytes()) << ", error "
            << pct(model_ifmap_bytes, ifmap.bytes()) << "\n";

  double filter_mli = oracle_l1_filter_phase_mean(
      e.shape.n, e.shape.k, e.tiling.cta_k, e.cfg.elem_bytes, gran, cap);
  std::cout << "l1 filter mli    model " << format_sig6(e.traffic.mli_filter)
            << ", oracle " << format_sig6(filter_mli) << ", error "
            << pct(e.traffic.mli_filter, filter_mli) << "\n";

  L2OracleSummary l2 = oracle_l2(e.cfg, e.tiling, 2, cap);
  double model_l2_per_loop =
      e.traffic.l2_bytes_per_loop / static_cast<double>(e.cfg.elem_bytes);
  std::cout << "l2 elems/loop    model " << format_sig6(model_l2_per_loop)
            << ", oracle " << format_sig6(l2.mean_elements_per_loop)
            << ", error " << pct(model_l2_per_loop, l2.mean_elements_per_loop)
            << "\n";

  DramOracleResult dram = oracle_dram(e.cfg, e.tiling, cap);
  std::cout << "dram bytes       model " << format_sig6(e.traffic.dram_bytes)
            << ", oracle " << format_sig6(static_cast<double>(dram.load_bytes))
            << " (" << dram.visited_elements << " input elements visited)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

int run_presets(const std::string& dump) {
  if (!dump.empty()) {
    if (dump == "options") {
      std::cout << kDesignOptionsText;
      return 0;
    }
    for (const auto& name : preset_device_names())
      if (name == dump) {
        std::cout << preset_device_text(name);
        return 0;
      }
    for (const auto& name : network_names())
      if (name == dump) {
        std::cout << network_text(name);
        return 0;
      }
    throw ValidationError("unknown preset '" + dump + "'");
  }
  std::cout << "devices:";
  for (const auto& name : preset_device_names()) std::cout << " " << name;
  std::cout << "\nnetworks:";
  for (const auto& name : network_names()) std::cout << " " << name;
  std::cout << "\noptions:";
  for (const auto& opt : preset_design_options()) std::cout << " " << opt.name;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Analytical GPU cache-traffic and execution-time estimator for "
      "convolution layers lowered to im2col GEMM"};
  app.require_subcommand(1);

  DeviceArgs dev;
  ModelArgs model;
  LayerArgs layer;
  std::string net = "resnet152";
  std::string out_path;
  std::string param = "co";
  std::vector<int64_t> values;
  std::string options_path;
  int64_t cap = kDefaultOracleCap;
  std::string dump;

  CLI::App* estimate = app.add_subcommand(
      "estimate", "Estimate one layer and print a full report");
  dev.attach(estimate);
  model.attach(estimate);
  layer.attach(estimate);

  CLI::App* network = app.add_subcommand(
      "network", "Estimate every layer of a network, CSV to stdout");
  dev.attach(network);
  model.attach(network);
  network->add_option("--net", net, "network preset or layer CSV path")
      ->capture_default_str();
  network->add_option("--out", out_path, "write CSV here instead of stdout");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep one parameter of the baseline layer, CSV to stdout");
  dev.attach(sweep);
  model.attach(sweep);
  sweep->add_option("--param", param, "parameter to sweep: co, ci, hw, b")
      ->capture_default_str();
  sweep->add_option("--values", values, "values to sweep (default power-of-2)")
      ->delimiter(',');

  CLI::App* scale = app.add_subcommand(
      "scale", "Evaluate scaled-up devices over a network");
  dev.attach(scale);
  model.attach(scale);
  scale->add_option("--net", net, "network preset or layer CSV path")
      ->capture_default_str();
  scale->add_option("--options", options_path,
                    "design options file (default: bundled ladder)");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Cross-check the model against brute-force address streams");
  dev.attach(oracle);
  model.attach(oracle);
  layer.attach(oracle);
  oracle->add_option("--oracle-cap", cap,
                     "element-visit budget before giving up")
      ->capture_default_str();

  CLI::App* presets = app.add_subcommand(
      "presets", "List bundled devices, networks, and design options");
  presets->add_option("--dump", dump, "print one bundled file verbatim");

  CLI11_PARSE(app, argc, argv);

  try {
    if (estimate->parsed()) return run_estimate(dev, model, layer);
    if (network->parsed()) return run_network(dev, model, net, out_path);
    if (sweep->parsed()) return run_sweep(dev, model, param, values);
    if (scale->parsed()) return run_scale(dev, model, net, options_path);
    if (oracle->parsed()) return run_oracle(dev, model, layer, cap);
    if (presets->parsed()) return run_presets(dump);
  } catch (const convperf::OracleCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
