#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affinehit/series.hpp"

namespace affinehit::registry {

using Bindings = std::map<std::string, double, std::less<>>;

/// A named, parameterised entry point into the library.
struct Formula {
  std::string id;                    ///< kebab-case name used by `eval`
  std::vector<std::string> aliases;
  std::vector<std::string> symbols;  ///< library functions it evaluates
  std::vector<std::string> params;   ///< required bindings, in call order
  std::string summary;
  std::function<SeriesResult(const Bindings&, const SeriesOptions&)> eval;
  /// Total mass of the law when it can be defective; empty otherwise.
  std::function<std::optional<double>(const Bindings&)> total_mass;
};

const std::vector<Formula>& formulas();

/// Looks up an id or alias; nullptr when unknown.
const Formula* find(std::string_view id);

/// Sorted union of every parameter name.
std::vector<std::string> parameter_names();

/// Checks that every parameter is bound, then evaluates. Missing bindings
/// raise DomainError naming the parameter.
SeriesResult evaluate(const Formula& f, const Bindings& bindings,
                      const SeriesOptions& opt = {});

}  // namespace affinehit::registry
