#include "intricacy/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "intricacy/errors.hpp"

namespace intricacy::harness {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && ptr == s.data() + s.size()) return v;
  // Accept integral values in exponent form such as 1e5.
  const double d = to_double(s);
  if (d != std::floor(d)) throw ConfigError("not an integer: '" + s + "'");
  return static_cast<Int>(d);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

class Registry {
 public:
  void add(std::string key, Binding b) {
    order_.push_back(key);
    map_.emplace(std::move(key), std::move(b));
  }
  void real(const std::string& key, double& v) {
    add(key, {[&v](const std::string& s) { v = to_double(s); }, [&v] { return format_number(v); }});
  }
  template <typename Int>
  void integer(const std::string& key, Int& v) {
    add(key, {[&v](const std::string& s) { v = to_int<Int>(s); },
              [&v] { return std::to_string(v); }});
  }
  void boolean(const std::string& key, bool& v) {
    add(key, {[&v](const std::string& s) { v = to_bool(s); },
              [&v] { return std::string(v ? "true" : "false"); }});
  }
  void reals(const std::string& key, std::vector<double>& v) {
    add(key, {[&v](const std::string& s) {
                v.clear();
                for (const auto& item : split_list(s)) v.push_back(to_double(item));
              },
              [&v] {
                std::vector<std::string> items;
                for (double x : v) items.push_back(format_number(x));
                return join(items);
              }});
  }
  template <typename Enum>
  void choice(const std::string& key, Enum& v, std::vector<std::pair<std::string, Enum>> options) {
    add(key, {[&v, options, key](const std::string& s) {
                for (const auto& [name, value] : options)
                  if (name == s) {
                    v = value;
                    return;
                  }
                throw ConfigError("invalid value '" + s + "' for " + key);
              },
              [&v, options] {
                for (const auto& [name, value] : options)
                  if (value == v) return name;
                return std::string("?");
              }});
  }

  const Binding* find(const std::string& key) const {
    const auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
  }
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::map<std::string, Binding> map_;
  std::vector<std::string> order_;
};

// Binds every key to a field of cfg. The config must outlive the registry.
Registry bind(ExperimentConfig& cfg) {
  Registry r;
  auto& ix = cfg.indexed;
  r.integer("indexed.n_atoms", ix.lattice.n_atoms);
  r.integer("indexed.channels", ix.lattice.channels);
  r.integer("indexed.grid_points", ix.lattice.grid_points);
  r.real("indexed.box_length", ix.lattice.box_length);
  r.real("indexed.dt", ix.lattice.dt);
  r.real("indexed.t_end", ix.lattice.t_end);
  r.real("indexed.snapshot_interval", ix.snapshot_interval);
  r.real("indexed.packet_width", ix.lattice.packet_width);
  r.real("indexed.packet_momentum", ix.lattice.packet_momentum);
  r.add("indexed.initial_string",
        {[&ix](const std::string& s) {
           ix.lattice.initial_string.clear();
           for (const auto& item : split_list(s)) ix.lattice.initial_string.push_back(to_int<int>(item));
         },
         [&ix] {
           std::vector<std::string> items;
           for (int v : ix.lattice.initial_string) items.push_back(std::to_string(v));
           return join(items);
         }});
  r.real("indexed.potential.strength", ix.potential.strength);
  r.real("indexed.potential.range", ix.potential.range);
  r.boolean("indexed.m.present", ix.coupling.present);
  r.real("indexed.m.strength", ix.coupling.strength);
  r.real("indexed.m.range", ix.coupling.range);
  r.real("indexed.m.mass", ix.coupling.mass);
  r.integer("indexed.m.grid_points", ix.coupling.grid_points);
  r.real("indexed.m.packet_center", ix.coupling.packet.center);
  r.real("indexed.m.packet_width", ix.coupling.packet.width);
  r.real("indexed.m.packet_momentum", ix.coupling.packet.momentum);
  r.add("indexed.m.channel_weights",
        {[&ix](const std::string& s) {
           ix.coupling.channel_weights.clear();
           for (const auto& item : split_list(s)) ix.coupling.channel_weights.emplace_back(to_double(item));
         },
         [&ix] {
           std::vector<std::string> items;
           for (const auto& c : ix.coupling.channel_weights) items.push_back(format_number(c.real()));
           return join(items);
         }});
  r.integer("indexed.measure.atom", ix.measure_atom);
  r.integer("indexed.measure.channel", ix.measure_channel);
  r.boolean("indexed.oracle", ix.oracle);

  auto& k = cfg.kmc;
  r.integer("kmc.n_particles", k.gas.n_particles);
  r.real("kmc.box_x", k.gas.box[0]);
  r.real("kmc.box_y", k.gas.box[1]);
  r.real("kmc.box_z", k.gas.box[2]);
  r.real("kmc.max_packing_fraction", k.gas.max_packing_fraction);
  r.integer("kmc.seed", k.gas.seed);
  r.real("kmc.cell_size", k.gas.cell_size);
  r.real("kmc.t_end", k.t_end);
  r.real("kmc.sample_interval", k.sample_interval);
  r.real("kmc.bin_width", k.run.bin_width);
  r.boolean("kmc.contagion", k.run.contagion);
  r.choice("kmc.mixed_policy", k.run.mixed,
           {{"elastic", kmc::MixedPolicy::elastic}, {"pass_through", kmc::MixedPolicy::pass_through}});
  r.real("kmc.source_refresh", k.run.source_refresh);
  r.choice("kmc.source.geometry", k.source.geometry,
           {{"plane", kmc::SourceSpec::Geometry::plane},
            {"track", kmc::SourceSpec::Geometry::track},
            {"point", kmc::SourceSpec::Geometry::point}});
  r.real("kmc.source.plane_z", k.source.plane_z);
  r.real("kmc.source.thickness", k.source.thickness);
  for (int a = 0; a < 3; ++a) {
    const std::string axis = std::string(1, "xyz"[a]);
    r.real("kmc.source.start_" + axis, k.source.start[a]);
    r.real("kmc.source.end_" + axis, k.source.end[a]);
  }
  r.real("kmc.source.radius", k.source.radius);
  r.boolean("kmc.source.continuous", k.source.continuous);
  r.integer("kmc.source.channel", k.source.channel);
  r.real("kmc.threshold", k.threshold);
  r.real("kmc.fit_start", k.fit_start);
  r.boolean("kmc.control", k.control);

  auto& p = cfg.pde;
  r.choice("pde.geometry", p.geometry,
           {{"planar", kinetics::Geometry::planar}, {"radial", kinetics::Geometry::radial}});
  r.real("pde.z_min", p.z_min);
  r.real("pde.z_max", p.z_max);
  r.real("pde.dx", p.dx);
  r.real("pde.dt", p.dt);
  r.real("pde.t_end", p.t_end);
  r.real("pde.sample_interval", p.sample_interval);
  r.real("pde.source.z", p.source_z);
  r.real("pde.source.amplitude", p.amplitude);
  r.boolean("pde.constraint.enabled", p.constraint_enabled);
  r.real("pde.constraint.speed", p.constraint_speed);
  r.real("pde.threshold", p.threshold);
  r.real("pde.fit_start", p.fit_start);
  r.boolean("pde.free.enabled", p.free_enabled);
  r.reals("pde.free.dx", p.free_dx);
  r.real("pde.free.t_end", p.free_t_end);
  r.real("pde.free.z_max", p.free_z_max);
  r.real("pde.free.threshold", p.free_threshold);
  r.boolean("pde.multichannel.enabled", p.multichannel_enabled);
  r.real("pde.multichannel.p1", p.multichannel_p1);
  r.real("pde.multichannel.p2", p.multichannel_p2);
  r.real("pde.multichannel.epsilon", p.multichannel_epsilon);
  r.real("pde.multichannel.t_end", p.multichannel_t_end);

  auto& f = cfg.front;
  r.real("front.C", f.C);
  r.add("front.x0", {[&f](const std::string& s) {
                       if (s == "auto") f.x0.reset();
                       else f.x0 = to_double(s);
                     },
                     [&f] { return f.x0 ? format_number(*f.x0) : std::string("auto"); }});
  r.real("front.dx", f.dx);
  r.real("front.rtol", f.rtol);
  r.real("front.atol", f.atol);
  r.real("front.max_span", f.max_span);

  auto& c = cfg.census;
  r.real("census.n_e", c.n_e);
  r.real("census.v_e", c.v_e);
  r.real("census.v_prime", c.v_prime);
  r.real("census.L", c.L);
  r.real("census.lambda_mfp", c.lambda_mfp);
  return r;
}

const std::set<std::string> kSections{"indexed", "kmc", "pde", "front", "census"};

}  // namespace

IndexedSection::IndexedSection() { lattice.initial_string = {1, 0}; }

double PdeSection::resolved_dt() const { return dt > 0 ? dt : 1.5 * dx * dx; }

void PdeSection::validate() const {
  if (!(dx > 0)) throw ConfigError("pde.dx must be positive");
  if (!(z_max > z_min)) throw ConfigError("pde.z_max must exceed pde.z_min");
  if (!(t_end > 0)) throw ConfigError("pde.t_end must be positive");
  if (!(sample_interval > 0)) throw ConfigError("pde.sample_interval must be positive");
  if (source_z < z_min || source_z > z_max) throw ConfigError("pde.source.z outside the domain");
  if (!(threshold > 0 && threshold < 1)) throw ConfigError("pde.threshold must lie in (0, 1)");
  if (!(free_threshold > 0 && free_threshold < 1))
    throw ConfigError("pde.free.threshold must lie in (0, 1)");
  if (free_enabled && free_dx.empty()) throw ConfigError("pde.free.dx needs at least one spacing");
  for (double h : free_dx)
    if (!(h > 0)) throw ConfigError("pde.free.dx entries must be positive");
  if (!(multichannel_p1 >= 0 && multichannel_p2 >= 0 &&
        std::abs(multichannel_p1 + multichannel_p2 - 1.0) < 1e-12))
    throw ConfigError("pde.multichannel.p1 + p2 must equal 1");
  if (!(multichannel_epsilon > 0 && multichannel_epsilon <= 1))
    throw ConfigError("pde.multichannel.epsilon must lie in (0, 1]");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  ExperimentConfig copy = *this;
  const Registry r = bind(copy);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& key : r.order()) out.emplace_back(key, r.find(key)->get());
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  const Registry r = bind(cfg);
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where() + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw ConfigError(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where() + "expected key = value");
    if (section.empty()) throw ConfigError(where() + "key outside of any section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Binding* b = r.find(key);
    if (!b) throw ConfigError(where() + "unknown key " + key);
    if (!seen.insert(key).second) throw ConfigError(where() + "duplicate key " + key);
    try {
      b->set(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where() + key + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace intricacy::harness
