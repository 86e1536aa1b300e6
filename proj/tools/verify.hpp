#pragma once

#include <string>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/heat_content.hpp"

namespace graphheat::cli {

enum class Suite { Identities, Inequalities, Oracle, Asymptotics, All };

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Checks that do not apply to the graph (no loop, no standard vertex, ...) are omitted.
// mesh > 0 overrides the oracle mesh width.
std::vector<Check> run_suite(const MetricGraph& g, Suite suite, const EvalConfig& cfg, double mesh = 0.0);

}  // namespace graphheat::cli
