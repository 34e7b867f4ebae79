#include "rotcb/experiment.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rotcb/error.hpp"
#include "rotcb/numeric_io.hpp"

namespace rotcb {

namespace {

const std::set<std::string, std::less<>> kSweepParameters = {"scheduled_k", "sigma",  "total_bits",
                                                              "snr_db",      "scheme", "geometry"};

std::string where(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return "";
  return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] void config_error(const YAML::Node& node, const std::string& message) {
  fail(ErrorKind::ConfigError, where(node) + message);
}

template <typename T>
T scalar(const YAML::Node& node, std::string_view key) {
  if (!node.IsScalar()) config_error(node, "'" + std::string(key) + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    config_error(node, "'" + std::string(key) + "' has an invalid value '" + node.Scalar() + "'");
  }
}

void require_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsMap()) config_error(node, std::string(what) + " must be a mapping");
}

template <typename Handler>
void for_each_key(const YAML::Node& map, std::string_view section, Handler&& handle) {
  for (const auto& entry : map) {
    const auto key = entry.first.as<std::string>();
    if (!handle(key, entry.second)) {
      config_error(entry.first, "unknown key '" + key + "' in " + std::string(section));
    }
  }
}

void read_profile(const YAML::Node& node, ChannelProfile& p) {
  require_map(node, "profile");
  for_each_key(node, "profile", [&](const std::string& key, const YAML::Node& v) {
    if (key == "n_clusters") p.n_clusters = scalar<int>(v, key);
    else if (key == "rays_per_cluster") p.rays_per_cluster = scalar<int>(v, key);
    else if (key == "center_h_range_deg") p.center_h_range_deg = scalar<double>(v, key);
    else if (key == "center_v_range_deg") p.center_v_range_deg = scalar<double>(v, key);
    else if (key == "sigma_deg") p.cluster_rms_deg = scalar<double>(v, key);
    else if (key == "ray_offset_rms_deg") p.ray_offset_rms_deg = scalar<double>(v, key);
    else if (key == "gain_variance") p.gain_variance = scalar<double>(v, key);
    else return false;
    return true;
  });
}

void read_base(const YAML::Node& node, SimConfig& cfg) {
  require_map(node, "base");
  for_each_key(node, "base", [&](const std::string& key, const YAML::Node& v) {
    try {
      if (key == "geometry") cfg.geometry = ArrayGeometry::parse(scalar<std::string>(v, key));
      else if (key == "profile") read_profile(v, cfg.profile);
      else if (key == "users_pool") cfg.users_pool = scalar<int>(v, key);
      else if (key == "scheduled_k") cfg.scheduled_k = scalar<int>(v, key);
      else if (key == "snr_db") cfg.snr_db = scalar<double>(v, key);
      else if (key == "total_bits") cfg.total_bits = scalar<int>(v, key);
      else if (key == "scheme") cfg.scheme = parse_scheme(scalar<std::string>(v, key));
      else if (key == "n1") cfg.n1 = scalar<Index>(v, key);
      else if (key == "n2") cfg.n2 = scalar<Index>(v, key);
      else if (key == "trials") cfg.trials = scalar<int>(v, key);
      else if (key == "seed") cfg.seed = scalar<std::uint64_t>(v, key);
      else if (key == "correlation") cfg.correlation = parse_correlation_path(scalar<std::string>(v, key));
      else if (key == "corr_ray_draws") cfg.corr_ray_draws = scalar<int>(v, key);
      else if (key == "corr_quadrature_nodes") cfg.corr_quadrature_nodes = scalar<int>(v, key);
      else if (key == "per_user_base") cfg.per_user_base = scalar<bool>(v, key);
      else return false;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError && std::string_view(e.message()).find("line ") != std::string_view::npos) {
        throw;
      }
      config_error(v, e.message());
    }
    return true;
  });
}

SweepAxis read_axis(const YAML::Node& node) {
  require_map(node, "sweep entry");
  SweepAxis axis;
  bool has_values = false;
  for_each_key(node, "sweep entry", [&](const std::string& key, const YAML::Node& v) {
    if (key == "parameter") {
      axis.parameter = scalar<std::string>(v, key);
      if (!kSweepParameters.contains(axis.parameter)) {
        config_error(v, "unknown sweep parameter '" + axis.parameter + "'");
      }
    } else if (key == "values") {
      if (!v.IsSequence() || v.size() == 0) config_error(v, "sweep values must be a non-empty list");
      for (const auto& item : v) axis.values.push_back(scalar<std::string>(item, "values"));
      has_values = true;
    } else {
      return false;
    }
    return true;
  });
  if (axis.parameter.empty()) config_error(node, "sweep entry needs 'parameter'");
  if (!has_values) config_error(node, "sweep entry needs 'values'");
  return axis;
}

int parse_int_value(std::string_view parameter, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const int x = std::stoi(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ConfigError, "sweep '" + std::string(parameter) + "': bad integer '" + std::string(value) + "'");
}

double parse_double_value(std::string_view parameter, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const double x = std::stod(s, &used);
    if (used == s.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::ConfigError, "sweep '" + std::string(parameter) + "': bad number '" + std::string(value) + "'");
}

void emit_profile(YAML::Emitter& out, const ChannelProfile& p) {
  out << YAML::Key << "profile" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_clusters" << YAML::Value << p.n_clusters;
  out << YAML::Key << "rays_per_cluster" << YAML::Value << p.rays_per_cluster;
  out << YAML::Key << "center_h_range_deg" << YAML::Value << format_double(p.center_h_range_deg);
  out << YAML::Key << "center_v_range_deg" << YAML::Value << format_double(p.center_v_range_deg);
  out << YAML::Key << "sigma_deg" << YAML::Value << format_double(p.cluster_rms_deg);
  out << YAML::Key << "ray_offset_rms_deg" << YAML::Value << format_double(p.ray_offset_rms_deg);
  if (p.gain_variance) out << YAML::Key << "gain_variance" << YAML::Value << format_double(*p.gain_variance);
  out << YAML::EndMap;
}

}  // namespace

void apply_sweep_value(SimConfig& cfg, std::string_view parameter, std::string_view value) {
  if (parameter == "scheduled_k") {
    cfg.scheduled_k = parse_int_value(parameter, value);
  } else if (parameter == "sigma") {
    cfg.profile.cluster_rms_deg = parse_double_value(parameter, value);
  } else if (parameter == "total_bits") {
    cfg.total_bits = parse_int_value(parameter, value);
  } else if (parameter == "snr_db") {
    cfg.snr_db = parse_double_value(parameter, value);
  } else if (parameter == "scheme") {
    cfg.scheme = parse_scheme(value);
  } else if (parameter == "geometry") {
    try {
      cfg.geometry = ArrayGeometry::parse(value);
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, e.message());
    }
  } else {
    fail(ErrorKind::ConfigError, "unknown sweep parameter '" + std::string(parameter) + "'");
  }
}

ExperimentSpec parse_spec(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::ConfigError, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  ExperimentSpec spec;
  if (root.IsNull()) return spec;
  require_map(root, "experiment spec");
  for_each_key(root, "experiment spec", [&](const std::string& key, const YAML::Node& v) {
    if (key == "format_version") {
      spec.format_version = scalar<int>(v, key);
      if (spec.format_version != kSpecFormatVersion) {
        config_error(v, "unsupported format_version " + std::to_string(spec.format_version));
      }
    } else if (key == "output") {
      spec.output = scalar<std::string>(v, key);
    } else if (key == "base") {
      read_base(v, spec.base);
    } else if (key == "sweep") {
      if (!v.IsSequence()) config_error(v, "'sweep' must be a list");
      for (const auto& axis : v) {
        spec.sweep.push_back(read_axis(axis));
        // Validate every value eagerly so errors point at the sweep entry, not a cell.
        SimConfig probe = spec.base;
        for (const auto& value : spec.sweep.back().values) {
          try {
            apply_sweep_value(probe, spec.sweep.back().parameter, value);
          } catch (const Error& e) {
            config_error(axis, e.message());
          }
        }
      }
    } else {
      return false;
    }
    return true;
  });
  try {
    spec.base.validate();
    for (const auto& cell : expand_cells(spec)) cell.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.message());
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, e.message());
  }
  return parse_spec(text);
}

std::string save_spec(const ExperimentSpec& spec) {
  const SimConfig& b = spec.base;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format_version" << YAML::Value << spec.format_version;
  if (!spec.output.empty()) out << YAML::Key << "output" << YAML::Value << spec.output;
  out << YAML::Key << "base" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "geometry" << YAML::Value << b.geometry.to_string();
  out << YAML::Key << "scheme" << YAML::Value << std::string(to_string(b.scheme));
  out << YAML::Key << "users_pool" << YAML::Value << b.users_pool;
  out << YAML::Key << "scheduled_k" << YAML::Value << b.scheduled_k;
  out << YAML::Key << "snr_db" << YAML::Value << format_double(b.snr_db);
  out << YAML::Key << "total_bits" << YAML::Value << b.total_bits;
  out << YAML::Key << "n1" << YAML::Value << b.n1;
  out << YAML::Key << "n2" << YAML::Value << b.n2;
  out << YAML::Key << "trials" << YAML::Value << b.trials;
  out << YAML::Key << "seed" << YAML::Value << b.seed;
  out << YAML::Key << "correlation" << YAML::Value << std::string(to_string(b.correlation));
  out << YAML::Key << "corr_ray_draws" << YAML::Value << b.corr_ray_draws;
  out << YAML::Key << "corr_quadrature_nodes" << YAML::Value << b.corr_quadrature_nodes;
  out << YAML::Key << "per_user_base" << YAML::Value << b.per_user_base;
  emit_profile(out, b.profile);
  out << YAML::EndMap;
  if (!spec.sweep.empty()) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginSeq;
    for (const auto& axis : spec.sweep) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "parameter" << YAML::Value << axis.parameter;
      out << YAML::Key << "values" << YAML::Value << YAML::Flow << axis.values;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<SimConfig> expand_cells(const ExperimentSpec& spec) {
  std::vector<SimConfig> cells{spec.base};
  for (const auto& axis : spec.sweep) {
    std::vector<SimConfig> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (const auto& value : axis.values) {
        SimConfig c = cell;
        apply_sweep_value(c, axis.parameter, value);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::string csv_row(const SumRateResult& result) {
  const SimConfig& c = result.config_echo;
  std::ostringstream row;
  row << to_string(result.scheme) << ',' << c.geometry.to_string() << ',' << c.scheduled_k << ','
      << format_double(c.profile.cluster_rms_deg) << ',' << c.total_bits << ',' << format_double(c.snr_db) << ','
      << c.trials << ',' << c.seed << ',' << format_double(result.mean_sum_rate) << ','
      << format_double(result.std_error);
  return row.str();
}

std::string run_experiment(const ExperimentSpec& spec, int threads) {
  std::string csv(kCsvHeader);
  csv += '\n';
  const auto cells = expand_cells(spec);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      csv += csv_row(run_trials(cells[i], threads));
      csv += '\n';
    } catch (const Error& e) {
      throw Error(e.kind(), "cell " + std::to_string(i) + " (" + std::string(to_string(cells[i].scheme)) + ", " +
                                cells[i].geometry.to_string() + "): " + e.message());
    }
  }
  return csv;
}

}  // namespace rotcb
