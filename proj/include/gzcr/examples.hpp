#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gzcr/fixtures.hpp"

namespace gzcr {

// Window for phi' corrections when completing a partially known shadow:
// (nonlocal monomial) * (jet monomial) * param^e.
struct CompletionAnsatz {
  int nonlocal_degree = 2;
  int jet_order = 1;
  int jet_degree = 1;
  int exponent_min = -3;
  int exponent_max = 3;

  std::string describe(const Variable& param) const;
};

std::map<Variable, std::vector<Monomial>> completion_candidates(const Covering& c, const Variable& param,
                                                                const CompletionAnsatz& ansatz);

enum class StepStatus { Pass, Fail, Info };

struct Step {
  std::string name;
  StepStatus status;
  std::string detail;
};

struct ExampleReport {
  std::string key;
  std::string title;
  std::vector<Step> steps;
  nlohmann::json data = nlohmann::json::object();

  bool passed() const;
  std::string text() const;
  nlohmann::json to_json() const;
};

struct ExampleInfo {
  std::string key;
  std::string title;
};

const std::vector<ExampleInfo>& example_registry();
// Throws std::out_of_range for an unknown key.
ExampleReport run_example(const std::string& key);

}  // namespace gzcr
