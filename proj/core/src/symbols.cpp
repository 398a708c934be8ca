#include "aef/symbols.hpp"

#include <stdexcept>

namespace aef {

bool ParamDomain::contains(double x) const {
  if (kind == Kind::Finite) {
    for (const auto& v : values)
      if (v.to_double() == x) return true;
    return false;
  }
  for (const auto& [lo, hi] : intervals)
    if (x >= lo && x <= hi) return true;
  return false;
}

bool operator==(const ParamDomain& a, const ParamDomain& b) {
  return a.kind == b.kind && a.intervals == b.intervals && a.values == b.values;
}

SymbolTable::SymbolTable() : coords_{"u0", "u1", "u2", "u3"} {
  coord_domains_.assign(kDim, {{-2.0, -0.1}, {0.1, 2.0}});
}

int SymbolTable::add_parameter(const std::string& name, ParamDomain domain) {
  if (is_declared(name)) throw std::invalid_argument("symbol declared twice: " + name);
  if (domain.is_finite() ? domain.values.empty() : domain.intervals.empty())
    throw std::invalid_argument("parameter without sampling set: " + name);
  params_.push_back({name, std::move(domain)});
  return static_cast<int>(params_.size()) - 1;
}

int SymbolTable::add_function(const std::string& name, int coord) {
  if (is_declared(name)) throw std::invalid_argument("symbol declared twice: " + name);
  if (coord < 0 || coord >= kDim) throw std::invalid_argument("function argument is not a coordinate: " + name);
  functions_.push_back({name, coord});
  return static_cast<int>(functions_.size()) - 1;
}

std::optional<int> SymbolTable::coordinate_index(const std::string& name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> SymbolTable::parameter_index(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> SymbolTable::function_index(const std::string& name) const {
  for (std::size_t i = 0; i < functions_.size(); ++i)
    if (functions_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

bool SymbolTable::is_declared(const std::string& name) const {
  return coordinate_index(name) || parameter_index(name) || function_index(name);
}

bool operator==(const SymbolTable& a, const SymbolTable& b) {
  if (a.coords_ != b.coords_ || a.coord_domains_ != b.coord_domains_) return false;
  if (a.params_.size() != b.params_.size() || a.functions_.size() != b.functions_.size()) return false;
  for (std::size_t i = 0; i < a.params_.size(); ++i)
    if (a.params_[i].name != b.params_[i].name || !(a.params_[i].domain == b.params_[i].domain)) return false;
  for (std::size_t i = 0; i < a.functions_.size(); ++i)
    if (a.functions_[i].name != b.functions_[i].name || a.functions_[i].coord != b.functions_[i].coord) return false;
  return true;
}

}  // namespace aef
