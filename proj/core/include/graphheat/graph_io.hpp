#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "graphheat/errors.hpp"
#include "graphheat/graph.hpp"

namespace graphheat {

// Malformed or invalid graph document; what() reads "source:line: message".
class GraphFileError : public InvalidGraph {
 public:
  GraphFileError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Document: {"vertices": [{"id", "kind": "dirichlet"|"standard"}], "edges": [{"id", "u", "v", "length"}]}.
// Ids must be a permutation of 0..n-1. The graph must pass validation.
MetricGraph parse_graph(std::string_view text, const std::string& source = "<input>");
MetricGraph load_graph(const std::string& path);
// Accepts a single graph or a {"components": [...]} document; component errors report lines
// relative to the re-serialized component, prefixed by "source#i".
std::vector<MetricGraph> parse_graphs(std::string_view text, const std::string& source = "<input>");
std::vector<MetricGraph> load_graphs(const std::string& path);

std::string to_json(const MetricGraph& g);
// {"components": [...]} when there is more than one graph.
std::string to_json(const std::vector<MetricGraph>& parts);
void save_text(const std::string& path, const std::string& text);

}  // namespace graphheat
