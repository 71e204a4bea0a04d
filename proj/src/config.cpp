#include "circfilt/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "circfilt/errors.hpp"

namespace circfilt {
namespace {

const std::vector<std::pair<std::string, std::string>>& default_table() {
  static const std::vector<std::pair<std::string, std::string>> table{
      {"model.kind", "circular"},
      {"model.kappa_phi", "1"},
      {"model.kappa_u", "10"},
      {"model.kappa_z", "none"},
      {"model.dt", "0.01"},
      {"model.obs_stride", "1"},
      {"model.alpha_mode", "ideal"},
      {"model.increments", "true"},
      {"model.static_state", "false"},
      {"model.a", "-1"},
      {"model.c", "1"},
      {"model.sigma_x2", "1"},
      {"model.sigma_u2", "1"},
      {"model.gkbf_denominator", "consistent"},
      {"filters.list", "circkf"},
      {"filters.particles", "0"},
      {"filters.gvm_order", "2"},
      {"filters.gauss_variant", "verbatim"},
      {"filters.quad_points", "512"},
      {"experiment.runs", "2000"},
      {"experiment.T", "10"},
      {"experiment.seed", "1"},
      {"experiment.jobs", "0"},
      {"experiment.record_stride", "1"},
      {"init.mode", "prior"},
      {"init.mu0", "0"},
      {"init.kappa0", "2"},
      {"init.sigma2_0", "0.5"},
      {"sweep.parameter", "kappa_z"},
      {"sweep.values", "0.1, 1, 10, 100"},
      {"timing.repeats", "5"},
      {"output.dir", "out"},
      {"output.traces", "0"},
      {"output.plots", "true"},
  };
  return table;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string key_list() {
  std::string out;
  for (const auto& k : Settings::valid_keys()) out += (out.empty() ? "" : ", ") + k;
  return out;
}

bool is_valid_key(std::string_view key) {
  const auto& keys = Settings::valid_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Settings Settings::defaults() {
  Settings s;
  for (const auto& [k, v] : default_table()) s.values_.emplace(k, v);
  return s;
}

const std::vector<std::string>& Settings::valid_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& entry : default_table()) k.push_back(entry.first);
    return k;
  }();
  return keys;
}

void Settings::set(std::string_view key, std::string value) {
  if (!is_valid_key(key)) throw ConfigError("unknown key '" + std::string(key) + "'; valid keys: " + key_list());
  values_.insert_or_assign(std::string(key), trim(value));
}

void Settings::merge_ini(std::istream& in, const std::string& source) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(source + ": key '" + section + "' must appear inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!is_valid_key(full))
        throw ConfigError(source + ": unknown key '" + full + "' in [" + section + "]; valid keys: " + key_list());
      values_.insert_or_assign(full, trim(value.data()));
    }
  }
}

void Settings::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  merge_ini(in, path.string());
}

void Settings::merge_header(const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (is_valid_key(key)) values_.insert_or_assign(key, trim(std::string_view(line).substr(eq + 1)));
  }
}

const std::string& Settings::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + std::string(key) + "'");
  return it->second;
}

double Settings::get_double(std::string_view key) const {
  const std::string& text = get(key);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("key '" + std::string(key) + "': '" + text + "' is not a finite number");
  return v;
}

std::optional<double> Settings::get_optional_double(std::string_view key) const {
  if (get(key) == "none" || get(key).empty()) return std::nullopt;
  return get_double(key);
}

long long Settings::get_int(std::string_view key) const {
  const std::string& text = get(key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("key '" + std::string(key) + "': '" + text + "' is not an integer");
  return v;
}

bool Settings::get_bool(std::string_view key) const {
  const std::string& text = get(key);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("key '" + std::string(key) + "': '" + text + "' is not a boolean");
}

std::vector<std::string> Settings::get_list(std::string_view key) const {
  std::vector<std::string> out;
  std::stringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> Settings::header_lines() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k + " = " + v);
  return out;
}

ExperimentConfig Settings::experiment(bool with_filters) const {
  auto non_negative = [this](std::string_view key) {
    const long long v = get_int(key);
    if (v < 0) throw ConfigError("key '" + std::string(key) + "' must be ≥ 0");
    return v;
  };
  ExperimentConfig c;
  c.model = parse_model_kind(get("model.kind"));
  c.circular.kappa_phi = get_double("model.kappa_phi");
  c.circular.kappa_u = get_double("model.kappa_u");
  c.circular.kappa_z = get_optional_double("model.kappa_z");
  c.circular.dt = get_double("model.dt");
  c.circular.obs_stride = static_cast<std::size_t>(non_negative("model.obs_stride"));
  c.circular.alpha_mode = parse_alpha_mode(get("model.alpha_mode"));
  c.increments = get_bool("model.increments");
  c.static_state = get_bool("model.static_state");
  c.linear.a = get_double("model.a");
  c.linear.c = get_double("model.c");
  c.linear.sigma_x2 = get_double("model.sigma_x2");
  c.linear.sigma_u2 = get_double("model.sigma_u2");
  c.linear.dt = c.circular.dt;
  const std::string& den = get("model.gkbf_denominator");
  if (den == "consistent") c.gkbf_denominator = GkbfDenominator::kConsistent;
  else if (den == "verbatim") c.gkbf_denominator = GkbfDenominator::kVerbatim;
  else throw ConfigError("model.gkbf_denominator must be consistent or verbatim");

  const auto particles = static_cast<std::size_t>(non_negative("filters.particles"));
  const auto order = non_negative("filters.gvm_order");
  for (const auto& item : with_filters ? get_list("filters.list") : std::vector<std::string>{}) {
    FilterSpec spec = parse_filter_spec(item);
    if (item.find('(') == std::string::npos) {
      if (spec.kind == FilterKind::kPf) spec.particles = particles;
      if (spec.kind == FilterKind::kGvm) {
        if (order < 1 || order > kMaxGvmOrder)
          throw ConfigError("filters.gvm_order must lie in 1.." + std::to_string(kMaxGvmOrder));
        spec.order = static_cast<int>(order);
      }
    }
    c.filters.push_back(spec);
  }
  c.gauss_variant = parse_gauss_variant(get("filters.gauss_variant"));
  c.quad_points = static_cast<int>(get_int("filters.quad_points"));

  c.runs = static_cast<std::size_t>(non_negative("experiment.runs"));
  c.T = get_double("experiment.T");
  c.seed = static_cast<std::uint64_t>(non_negative("experiment.seed"));
  c.jobs = static_cast<int>(non_negative("experiment.jobs"));
  c.record_stride = static_cast<std::size_t>(non_negative("experiment.record_stride"));
  c.trace_runs = static_cast<std::size_t>(non_negative("output.traces"));

  c.init.mode = parse_init_mode(get("init.mode"));
  c.init.mu0 = get_double("init.mu0");
  c.init.kappa0 = get_double("init.kappa0");
  c.init.sigma2_0 = get_double("init.sigma2_0");
  try {
    if (with_filters) c.validate();
    else c.validate_model();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace circfilt
