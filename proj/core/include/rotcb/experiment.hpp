#pragma once

// Experiment specs: a SimConfig template plus sweep axes, stored as YAML.
//
//   format_version: 1
//   output: results.csv
//   base:
//     geometry: ura:8x8          # or ucca:8x8[:radius_step]
//     scheme: tdc                # rc | tdc | iqc | perfect_cdi
//     scheduled_k: 4
//     total_bits: 8
//     ...
//     profile: {n_clusters: 12, rays_per_cluster: 20, sigma_deg: 5, ...}
//   sweep:
//     - {parameter: scheme, values: [rc, tdc, iqc]}
//     - {parameter: sigma, values: [5, 20]}

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rotcb/simulator.hpp"

namespace rotcb {

inline constexpr int kSpecFormatVersion = 1;

struct SweepAxis {
  std::string parameter;  // scheduled_k | sigma | total_bits | snr_db | scheme | geometry
  std::vector<std::string> values;

  bool operator==(const SweepAxis&) const = default;
};

struct ExperimentSpec {
  int format_version = kSpecFormatVersion;
  SimConfig base;
  std::vector<SweepAxis> sweep;
  std::string output;

  bool operator==(const ExperimentSpec&) const = default;
};

/// Throws ConfigError (with line context where available).
ExperimentSpec parse_spec(std::string_view yaml_text);
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string save_spec(const ExperimentSpec& spec);

/// Applies one sweep value to a config; throws ConfigError on bad input.
void apply_sweep_value(SimConfig& cfg, std::string_view parameter, std::string_view value);

/// Cartesian product of the sweep axes; the first axis varies slowest.
std::vector<SimConfig> expand_cells(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "scheme,geometry,k,sigma_deg,total_bits,snr_db,trials,seed,mean_sum_rate,std_error";

std::string csv_row(const SumRateResult& result);

/// Runs every cell in order and returns the CSV text including the header.
std::string run_experiment(const ExperimentSpec& spec, int threads = 1);

}  // namespace rotcb
