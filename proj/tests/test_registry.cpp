#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include "doctest.h"

#include "affinehit/errors.hpp"
#include "affinehit/registry.hpp"

using namespace affinehit;

namespace {

// Scalar-valued functions declared in the public formula headers.
std::set<std::string> declared_formulas() {
  const std::regex decl(R"(^(?:SeriesResult|double|std::vector<double>)\s+(\w+)\()");
  std::set<std::string> out;
  for (const char* h : {"specialfn.hpp", "wedge.hpp", "rbm_hitting.hpp", "bes_hitting.hpp",
                        "bridge_extremes.hpp"}) {
    std::ifstream in(std::filesystem::path(AFFINEHIT_HEADER_DIR) / h);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
      std::smatch m;
      if (std::regex_search(line, m, decl)) out.insert(m[1]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("every library formula is reachable from eval") {
  const auto declared = declared_formulas();
  CHECK(declared.size() > 30);
  std::set<std::string> covered;
  for (const auto& f : registry::formulas()) covered.insert(f.symbols.begin(), f.symbols.end());
  for (const auto& name : declared) {
    INFO("not in the registry: ", name);
    CHECK(covered.count(name) == 1);
  }
  // and the registry names nothing that does not exist
  for (const auto& name : covered) {
    INFO("unknown symbol: ", name);
    CHECK(declared.count(name) == 1);
  }
}

TEST_CASE("ids are unique and aliases resolve") {
  std::set<std::string> ids;
  for (const auto& f : registry::formulas()) {
    CHECK(ids.insert(f.id).second);
    for (const auto& a : f.aliases) CHECK(ids.insert(a).second);
    CHECK(registry::find(f.id) == &f);
  }
  for (const char* id : {"rbm-survival", "theta-star", "bes-laplace", "bridge-max", "sup-drift", "last-hit"}) {
    CHECK(registry::find(id) != nullptr);
  }
  CHECK(registry::find("nope") == nullptr);
}

TEST_CASE("every formula evaluates at a valid point") {
  const registry::Bindings at{{"a", 1.0},    {"b", 0.5},     {"alpha", 1.0}, {"beta", 0.5},
                              {"u", 0.8},    {"t", 1.5},     {"delta", 3.0}, {"x", 0.5},
                              {"y", 0.7},    {"lambda", 1.0}, {"nu", 0.5},   {"n", 2.0},
                              {"sign", 1.0}, {"theta", 0.7}, {"w", 0.0},     {"lo", -1.0},
                              {"hi", 1.0}};
  for (const auto& f : registry::formulas()) {
    registry::Bindings b = at;
    if (f.id == "bes3-above-line-density") b["x"] = 2.0;
    INFO(f.id);
    const SeriesResult r = registry::evaluate(f, b);
    CHECK(std::isfinite(r.value));
    CHECK(r.tail_bound >= 0.0);
  }
}

TEST_CASE("missing parameters are named") {
  const auto* f = registry::find("rbm-survival");
  try {
    registry::evaluate(*f, {{"a", 1.0}, {"b", 1.0}});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("--u") != std::string::npos);
  }
}

TEST_CASE("defective mass is reported for rising lines") {
  const auto* f = registry::find("rbm-survival");
  CHECK(f->total_mass({{"a", 3.0}, {"b", 1.0}, {"u", 0.5}}).has_value());
  CHECK(!f->total_mass({{"a", 3.0}, {"b", -1.0}, {"u", 0.5}}).has_value());
}
