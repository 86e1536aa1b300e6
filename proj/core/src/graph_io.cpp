#include "graphheat/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace graphheat {

using nlohmann::json;

GraphFileError::GraphFileError(const std::string& source, std::size_t line, const std::string& message)
    : InvalidGraph(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

namespace {

// Character iterator that counts the newlines it has passed.
class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  std::size_t* line_;
};

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

struct Entry {
  json value;
  std::size_t line;
};

}  // namespace

MetricGraph parse_graph(std::string_view text, const std::string& source) {
  std::size_t line = 1;
  // Start lines of the objects at depth 2, in document order, per top-level key.
  std::vector<std::size_t> object_lines;
  std::vector<std::string> object_owner;
  std::string current_key;
  json doc;
  try {
    LineCountingIterator first(text.data(), &line), last(text.data() + text.size(), &line);
    doc = json::parse(first, last, [&](int depth, json::parse_event_t event, json& parsed) {
      if (depth == 1 && event == json::parse_event_t::key) current_key = parsed.get<std::string>();
      if (depth == 2 && event == json::parse_event_t::object_start) {
        object_lines.push_back(line);
        object_owner.push_back(current_key);
      }
      return true;
    });
  } catch (const json::parse_error& e) {
    throw GraphFileError(source, line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  if (!doc.is_object()) throw GraphFileError(source, 1, "document must be an object");
  std::vector<Entry> vertices, edges;
  {
    for (const char* key : {"vertices", "edges"}) {
      if (!doc.contains(key) || !doc[key].is_array())
        throw GraphFileError(source, 1, std::string("missing array field '") + key + "'");
    }
    std::vector<std::size_t> vertex_lines, edge_lines;
    for (std::size_t i = 0; i < object_lines.size(); ++i) {
      if (object_owner[i] == "vertices") vertex_lines.push_back(object_lines[i]);
      if (object_owner[i] == "edges") edge_lines.push_back(object_lines[i]);
    }
    auto collect = [&](const json& arr, const std::vector<std::size_t>& lines, std::vector<Entry>& out) {
      for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back({arr[i], i < lines.size() ? lines[i] : 1});
    };
    collect(doc["vertices"], vertex_lines, vertices);
    collect(doc["edges"], edge_lines, edges);
  }

  auto integer = [&](const Entry& e, const char* field) -> std::size_t {
    if (!e.value.is_object()) throw GraphFileError(source, e.line, "entry must be an object");
    if (!e.value.contains(field)) throw GraphFileError(source, e.line, std::string("missing field '") + field + "'");
    const json& v = e.value[field];
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw GraphFileError(source, e.line, std::string("field '") + field + "' must be a non-negative integer");
    return v.get<std::size_t>();
  };

  std::vector<VertexKind> kinds(vertices.size());
  std::vector<std::size_t> vertex_line(vertices.size(), 1);
  std::vector<bool> seen(vertices.size(), false);
  for (const Entry& e : vertices) {
    const std::size_t id = integer(e, "id");
    if (id >= vertices.size() || seen[id])
      throw GraphFileError(source, e.line, "vertex ids must be a permutation of 0.." + std::to_string(vertices.size() - 1));
    seen[id] = true;
    vertex_line[id] = e.line;
    const json& kind = e.value.contains("kind") ? e.value["kind"] : json();
    if (kind == "dirichlet") {
      kinds[id] = VertexKind::Dirichlet;
    } else if (kind == "standard") {
      kinds[id] = VertexKind::Standard;
    } else {
      throw GraphFileError(source, e.line, "vertex kind must be \"dirichlet\" or \"standard\"");
    }
  }

  std::vector<Edge> list(edges.size());
  std::vector<std::size_t> edge_line(edges.size(), 1);
  seen.assign(edges.size(), false);
  for (const Entry& e : edges) {
    const std::size_t id = integer(e, "id");
    if (id >= edges.size() || seen[id])
      throw GraphFileError(source, e.line, "edge ids must be a permutation of 0.." + std::to_string(edges.size() - 1));
    seen[id] = true;
    edge_line[id] = e.line;
    const std::size_t u = integer(e, "u"), v = integer(e, "v");
    if (u >= vertices.size() || v >= vertices.size())
      throw GraphFileError(source, e.line, "edge endpoint refers to an unknown vertex");
    const json& len = e.value.contains("length") ? e.value["length"] : json();
    if (!len.is_number() || !(len.get<double>() > 0.0) || !std::isfinite(len.get<double>()))
      throw GraphFileError(source, e.line, "edge length must be a positive finite number");
    list[id] = Edge{id, u, v, len.get<double>()};
  }

  MetricGraph g(std::move(kinds), std::move(list));
  if (!g.is_valid()) {
    const ValidationIssue& issue = g.validation().issues.front();
    std::size_t at = 1;
    if (issue.edge) at = edge_line[*issue.edge];
    else if (issue.vertex) at = vertex_line[*issue.vertex];
    throw GraphFileError(source, at, g.validation().summary());
  }
  return g;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphFileError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

MetricGraph load_graph(const std::string& path) { return parse_graph(read_file(path), path); }

std::vector<MetricGraph> parse_graphs(std::string_view text, const std::string& source) {
  const json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("components")) return {parse_graph(text, source)};
  if (!doc["components"].is_array() || doc["components"].empty())
    throw GraphFileError(source, 1, "'components' must be a non-empty array");
  std::vector<MetricGraph> out;
  for (std::size_t i = 0; i < doc["components"].size(); ++i)
    out.push_back(parse_graph(doc["components"][i].dump(2), source + "#" + std::to_string(i)));
  return out;
}

std::vector<MetricGraph> load_graphs(const std::string& path) { return parse_graphs(read_file(path), path); }

namespace {

json graph_json(const MetricGraph& g) {
  json vertices = json::array(), edges = json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    vertices.push_back({{"id", v}, {"kind", g.is_dirichlet(v) ? "dirichlet" : "standard"}});
  for (const Edge& e : g.edges()) edges.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"length", e.length}});
  return {{"vertices", vertices}, {"edges", edges}};
}

}  // namespace

std::string to_json(const MetricGraph& g) { return graph_json(g).dump(2) + "\n"; }

std::string to_json(const std::vector<MetricGraph>& parts) {
  if (parts.size() == 1) return to_json(parts.front());
  json list = json::array();
  for (const MetricGraph& g : parts) list.push_back(graph_json(g));
  return json{{"components", list}}.dump(2) + "\n";
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace graphheat
