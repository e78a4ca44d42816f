#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "corot/evolve.hpp"

namespace corot {

// Sectioned key-value run configuration.
//
//   [grid]    n, r_max
//   [time]    t_end, cfl, store_dt
//   [matter]  alpha, k, family, amplitude, center, width, momentum, table
//   [target]  name, coeffs
//   [output]  dir, run_id
//
// Keys are addressed as "section.key"; --set overrides use the same form.
class RunConfig {
 public:
  static RunConfig from_file(const std::filesystem::path& path);
  static RunConfig from_string(const std::string& text, const std::string& origin = "<string>");

  void apply_override(const std::string& key_eq_value);

  bool has(const std::string& dotted) const;
  std::string get(const std::string& dotted) const;
  std::string get_or(const std::string& dotted, const std::string& fallback) const;
  double get_double(const std::string& dotted) const;
  double get_double_or(const std::string& dotted, double fallback) const;
  int get_int_or(const std::string& dotted, int fallback) const;

  EvolutionConfig evolution() const;
  InitialDataSpec initial_data() const;
  std::string output_dir() const { return get_or("output.dir", "out"); }
  std::string run_id() const { return get_or("output.run_id", "run"); }

  // deterministic snapshot of all key-value pairs
  std::map<std::string, std::string> entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace corot
