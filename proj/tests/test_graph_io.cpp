#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "graphheat/graph_io.hpp"

namespace gh = graphheat;

namespace {

const char* kLasso = R"({
  "vertices": [
    {"id": 0, "kind": "dirichlet"},
    {"id": 1, "kind": "standard"}
  ],
  "edges": [
    {"id": 0, "u": 0, "v": 1, "length": 1.0},
    {"id": 1, "u": 1, "v": 1, "length": 2.0}
  ]
}
)";

std::size_t error_line(const std::string& text) {
  try {
    gh::parse_graph(text, "doc.json");
  } catch (const gh::GraphFileError& e) {
    return e.line();
  }
  ADD_FAILURE() << "document was accepted";
  return 0;
}

}  // namespace

TEST(GraphIo, ParsesLasso) {
  const auto g = gh::parse_graph(kLasso);
  EXPECT_TRUE(gh::isomorphic(g, fx::lasso()));
  EXPECT_TRUE(g.edge(1).is_loop());
}

TEST(GraphIo, RoundTrip) {
  for (const auto& g : {fx::lasso(), fx::figure_eight(), fx::star({1.0, 0.25, 3.5}, 2)}) {
    const auto back = gh::parse_graph(gh::to_json(g));
    ASSERT_EQ(back.edge_count(), g.edge_count());
    for (gh::EdgeId e = 0; e < g.edge_count(); ++e) {
      EXPECT_EQ(back.edge(e).u, g.edge(e).u);
      EXPECT_EQ(back.edge(e).v, g.edge(e).v);
      EXPECT_EQ(back.edge(e).length, g.edge(e).length);
    }
    EXPECT_EQ(back.kinds(), g.kinds());
  }
}

TEST(GraphIo, IdsMayBeListedOutOfOrder) {
  const auto g = gh::parse_graph(R"({"vertices": [{"id": 1, "kind": "standard"}, {"id": 0, "kind": "dirichlet"}],
                                   "edges": [{"id": 0, "u": 0, "v": 1, "length": 2.5}]})");
  EXPECT_TRUE(g.is_dirichlet(0));
  EXPECT_EQ(g.edge(0).length, 2.5);
}

TEST(GraphIo, SyntaxErrorLine) {
  std::string text = kLasso;
  text.replace(text.find("1.0},"), 5, "1.0 ");
  EXPECT_EQ(error_line(text), 8u);
}

TEST(GraphIo, BadLengthLine) {
  std::string text = kLasso;
  text.replace(text.find("2.0"), 3, "-2.0");
  EXPECT_EQ(error_line(text), 8u);
}

TEST(GraphIo, BadKindLine) {
  std::string text = kLasso;
  text.replace(text.find("\"standard\""), 10, "\"neumann\"");
  EXPECT_EQ(error_line(text), 4u);
}

TEST(GraphIo, ValidationFailureAnchoredAtVertex) {
  // A Dirichlet junction: the validation issue names vertex 1.
  std::string text = kLasso;
  text.replace(text.find("\"standard\""), 10, "\"dirichlet\"");
  EXPECT_EQ(error_line(text), 4u);
}

TEST(GraphIo, DuplicateIdRejected) {
  std::string text = kLasso;
  text.replace(text.find("\"id\": 1, \"u\""), 7, "\"id\": 0");
  EXPECT_EQ(error_line(text), 8u);
}

TEST(GraphIo, UnknownEndpointRejected) {
  std::string text = kLasso;
  text.replace(text.find("\"v\": 1, \"length\": 1.0"), 7, "\"v\": 5");
  EXPECT_EQ(error_line(text), 7u);
}

TEST(GraphIo, MessageCarriesSourceAndLine) {
  std::string text = kLasso;
  text.replace(text.find("2.0"), 3, "0");
  try {
    gh::parse_graph(text, "lasso.json");
    FAIL();
  } catch (const gh::GraphFileError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("lasso.json:8: ", 0), 0u) << e.what();
  }
}

TEST(GraphIo, ComponentsDocument) {
  const auto parts = gh::add_dirichlet(fx::star({1.0, 2.0, 3.0}, 1), 0);
  const std::string text = gh::to_json(parts);
  EXPECT_NE(text.find("\"components\""), std::string::npos);
  EXPECT_EQ(gh::to_json(std::vector<gh::MetricGraph>{fx::lasso()}), gh::to_json(fx::lasso()));
}

TEST(GraphIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "graphheat_io_test.json";
  gh::save_text(path.string(), gh::to_json(fx::figure_eight()));
  EXPECT_TRUE(gh::isomorphic(gh::load_graph(path.string()), fx::figure_eight()));
  std::filesystem::remove(path);
  EXPECT_THROW(gh::load_graph(path.string()), gh::GraphFileError);
}

TEST(GraphIo, ComponentsDocumentParsesBack) {
  const auto parts = gh::add_dirichlet(fx::star({1.0, 2.0, 3.0}, 1), 0);
  const auto back = gh::parse_graphs(gh::to_json(parts), "parts.json");
  ASSERT_EQ(back.size(), parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) EXPECT_TRUE(gh::isomorphic(back[i], parts[i]));
  EXPECT_EQ(gh::parse_graphs(gh::to_json(fx::lasso())).size(), 1u);
  EXPECT_THROW(gh::parse_graphs(R"({"components": []})"), gh::GraphFileError);
}
