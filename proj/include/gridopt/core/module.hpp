#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/core/model.hpp"
#include "gridopt/dataset.hpp"
#include "gridopt/io/table.hpp"
#include "gridopt/solver/solution.hpp"

namespace gridopt {

// Scalar run options declared by modules, overridable per scenario.
class Options {
 public:
  void declare(const std::string& key, std::string default_value, std::string help) {
    if (entries_.contains(key)) return;
    entries_[key] = {std::move(default_value), std::move(help)};
  }

  bool known(const std::string& key) const { return entries_.contains(key); }

  void set(const std::string& key, std::string value) {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(ErrorKind::ConfigError, "unknown option '" + key + "'");
    it->second.value = std::move(value);
  }

  const std::string& text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(ErrorKind::ConfigError, "option '" + key + "' was never declared");
    return it->second.value;
  }

  double real(const std::string& key) const {
    auto v = io::parse_real(text(key));
    if (!v) fail(ErrorKind::ConfigError, "option '" + key + "' is not a number: " + text(key));
    return *v;
  }

  bool flag(const std::string& key) const {
    const auto& v = text(key);
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    fail(ErrorKind::ConfigError, "option '" + key + "' is not a flag: " + v);
  }

  std::vector<std::pair<std::string, std::string>> listing() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, e] : entries_) out.emplace_back(k, e.value + "  " + e.help);
    return out;
  }

 private:
  struct Entry {
    std::string value;
    std::string help;
  };
  std::map<std::string, Entry> entries_;
};

// Tabular result written to <outputs>/<name>.csv.
struct OutputTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string fmt_num(double v) {
  if (v == 0.0 || std::abs(v) < 1e-9) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Everything a module callback may read. `warnings` collects non-fatal notes.
struct ModuleContext {
  Dataset& data;
  Options& options;
  const std::vector<std::string>& active_modules;
  std::vector<std::string>& warnings;

  bool active(std::string_view module) const {
    return std::find(active_modules.begin(), active_modules.end(), module) != active_modules.end();
  }

  const TimescaleSet& ts() const {
    if (!data.timescales) fail(ErrorKind::MissingInput, "timepoint tables not loaded (module timescales)");
    return *data.timescales;
  }
};

enum Callback : unsigned {
  kDefineArguments = 1u << 0,
  kDefineComponents = 1u << 1,
  kDefineDynamicComponents = 1u << 2,
  kLoadInputs = 1u << 3,
  kPostSolve = 1u << 4,
};

struct ModuleDescriptor {
  std::string name;
  unsigned callbacks = 0;
};

// A composable model piece. Callbacks run for every active module in list
// order, phase by phase.
class Module {
 public:
  virtual ~Module() = default;
  virtual ModuleDescriptor descriptor() const = 0;

  virtual void define_arguments(Options&) {}
  virtual void load_inputs(const io::TableSource&, ModuleContext&) {}
  virtual void define_components(ModelGraph&, ModuleContext&) {}
  virtual void define_dynamic_components(ModelGraph&, ModuleContext&) {}
  virtual void post_solve(const ModelGraph&, const ModuleContext&, const solver::Solution&,
                          std::vector<OutputTable>&) {}
};

using ModuleFactory = std::function<std::unique_ptr<Module>()>;

class ModuleCatalog {
 public:
  void add(ModuleFactory factory) {
    auto desc = factory()->descriptor();
    if (desc.callbacks == 0) fail(ErrorKind::ConfigError, "module " + desc.name + " declares no callbacks");
    factories_[desc.name] = std::move(factory);
  }

  bool contains(const std::string& name) const { return factories_.contains(name); }

  std::unique_ptr<Module> create(const std::string& name) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) fail(ErrorKind::UnknownModule, "no module named '" + name + "'");
    return it->second();
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : factories_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, ModuleFactory> factories_;
};

// Appends a module to an ordered module list.
inline std::vector<ModuleDescriptor> register_module(const ModuleDescriptor& descriptor,
                                                     std::vector<ModuleDescriptor> modules,
                                                     const ModuleCatalog& catalog) {
  if (!catalog.contains(descriptor.name)) fail(ErrorKind::UnknownModule, "no module named '" + descriptor.name + "'");
  if (descriptor.callbacks == 0) fail(ErrorKind::ConfigError, "module " + descriptor.name + " declares no callbacks");
  for (const auto& m : modules) {
    if (m.name == descriptor.name) fail(ErrorKind::DuplicateModule, "module '" + descriptor.name + "' listed twice");
  }
  modules.push_back(descriptor);
  return modules;
}

}  // namespace gridopt
