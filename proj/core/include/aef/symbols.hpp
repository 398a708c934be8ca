#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aef/rational.hpp"

namespace aef {

inline constexpr int kDim = 4;

// Where a parameter may be sampled: a union of closed intervals or a finite set.
struct ParamDomain {
  enum class Kind { Intervals, Finite };
  Kind kind = Kind::Intervals;
  std::vector<std::pair<double, double>> intervals;
  std::vector<Rational> values;

  static ParamDomain interval(double lo, double hi) { return {Kind::Intervals, {{lo, hi}}, {}}; }
  static ParamDomain finite(std::vector<Rational> v) { return {Kind::Finite, {}, std::move(v)}; }
  bool is_finite() const { return kind == Kind::Finite; }
  bool contains(double x) const;
};

struct Parameter {
  std::string name;
  ParamDomain domain;
};

// Arbitrary function of a single coordinate, e.g. a0(u0).
struct OpaqueFunction {
  std::string name;
  int coord = 0;
};

class SymbolTable {
 public:
  SymbolTable();

  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  const std::vector<OpaqueFunction>& functions() const { return functions_; }

  int add_parameter(const std::string& name, ParamDomain domain);
  int add_function(const std::string& name, int coord);

  std::optional<int> coordinate_index(const std::string& name) const;
  std::optional<int> parameter_index(const std::string& name) const;
  std::optional<int> function_index(const std::string& name) const;
  bool is_declared(const std::string& name) const;

  // Coordinates are sampled from [-hi,-lo] U [lo,hi] unless overridden.
  const std::vector<std::pair<double, double>>& coordinate_domain(int i) const { return coord_domains_[i]; }
  void set_coordinate_domain(int i, std::vector<std::pair<double, double>> d) { coord_domains_[i] = std::move(d); }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b);

 private:
  std::vector<std::string> coords_;
  std::vector<std::vector<std::pair<double, double>>> coord_domains_;
  std::vector<Parameter> params_;
  std::vector<OpaqueFunction> functions_;
};

bool operator==(const ParamDomain& a, const ParamDomain& b);

}  // namespace aef
