#pragma once

#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cylspec/eigensolve.hpp"
#include "cylspec/numerics.hpp"
#include "cylspec/potential.hpp"

namespace cylspec {

// Key-value tree parsed from the declarative run document: one level of
// [section] headers, `key = value` lines, values being numbers, strings,
// booleans, or flat arrays of numbers/strings. Keys are flattened to
// "section.key".
using ConfigValue =
    std::variant<double, bool, std::string, std::vector<double>,
                 std::vector<std::string>>;
using ConfigTree = std::map<std::string, ConfigValue>;

ConfigTree parse_config_text(const std::string& text);

struct RunConfig {
  // [nonlinearity]
  double a = 0.25;

  // [wave] kind = "front" | "periodic"; length only for periodic waves.
  std::string wave_kind = "front";
  double wave_length = 0.0;

  // [potential] kind = "front" | "synthetic" | "file".
  std::string potential_kind = "front";
  double alpha = 1.0;
  int nx = 63;
  int nz = 801;
  double z_extent = 20.0;  // axial grid spans [-z_extent, z_extent]
  Bc bc_x = Bc::dirichlet;
  Bc bc_z = Bc::dirichlet;
  std::string potential_file;

  // [operator]
  double speed = 0.0;
  bool speed_set = false;  // false: front speed derived from the profile

  // [solver]
  int k = 6;
  std::vector<Complex> shifts = {Complex(0.0, 0.0)};
  double residual_tol = 1e-8;
  int modes = 24;  // Galerkin size for trajectory projection
  unsigned long long seed = kEigSeed;

  // [dispersion] periodic-cell check of the constant-in-z operator.
  double period = 40.0;
  int dispersion_nz = 256;

  // [decay] fit window on the forward ray; NaN = default outer window.
  double fit_lo = std::numeric_limits<double>::quiet_NaN();
  double fit_hi = std::numeric_limits<double>::quiet_NaN();
  double hypothesis_tol = 1e-3;

  // [outputs]
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};

  bool wants(const std::string& format) const;
};

// Parses and fully validates; any defect raises a single config-error
// diagnostic naming the offending key.
RunConfig config_from_text(const std::string& text);
RunConfig load_config(const std::string& path);

Bc parse_bc(const std::string& name);

}  // namespace cylspec
