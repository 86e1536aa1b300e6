// graphheat: command-line front end for heat content computations on metric graphs.
//
// Exit codes: 0 success, 1 verification failure, 2 parse/validation/argument error,
// 3 evaluation budget exceeded.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "graphheat/errors.hpp"
#include "graphheat/graph.hpp"
#include "graphheat/graph_io.hpp"
#include "graphheat/heat_content.hpp"
#include "graphheat/spectral.hpp"
#include "verify.hpp"

namespace gh = graphheat;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kBudget = 3 };

// Full round-trip precision for every printed number.
std::string num(double x) { return fmt::format("{:.17g}", x); }

const char* method_name(gh::Method m) {
  switch (m) {
    case gh::Method::PathSum:
      return "path-sum";
    case gh::Method::Spectral:
      return "spectral";
    case gh::Method::Auto:
      return "auto";
  }
  return "?";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw gh::DomainError("malformed number '" + s + "' in " + what);
  return x;
}

gh::EdgeId to_edge(const std::string& s, const std::string& what) {
  const double x = to_double(s, what);
  if (!(x >= 0.0) || x != std::floor(x)) throw gh::DomainError("malformed edge id '" + s + "' in " + what);
  return static_cast<gh::EdgeId>(x);
}

// "E:OFF"
gh::GraphPoint parse_point(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw gh::DomainError("point must read EDGE:OFFSET, got '" + s + "'");
  return {to_edge(parts[0], s), to_double(parts[1], s)};
}

// "e:a:b,e:a:b"
gh::RegionSpec parse_region(const std::string& s) {
  gh::RegionSpec region;
  for (const std::string& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw gh::DomainError("region interval must read EDGE:A:B, got '" + item + "'");
    region.push_back({to_edge(parts[0], item), to_double(parts[1], item), to_double(parts[2], item)});
  }
  if (region.empty()) throw gh::DomainError("empty region");
  return region;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gh::DomainError("cannot write " + path);
    out << text;
  }
}

struct Options {
  std::string graph;
  int threads = 0;
  double tol = 1e-10;
  std::size_t max_terms = 10'000'000;
  gh::Method method = gh::Method::Auto;
  double t = 0.0;

  gh::EvalConfig config() const {
    gh::EvalConfig cfg;
    cfg.tolerance = tol;
    cfg.max_terms = max_terms;
    cfg.method = method;
    cfg.threads = static_cast<unsigned>(threads);
    return cfg;
  }
};

void add_common(CLI::App* cmd, Options& o, bool needs_time) {
  cmd->add_option("-g,--graph", o.graph, "graph file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tol", o.tol, "absolute tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-terms", o.max_terms, "walk budget of the path sum");
  cmd->add_option("--method", o.method, "auto, path-sum or spectral")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, gh::Method>{
              {"auto", gh::Method::Auto}, {"path-sum", gh::Method::PathSum}, {"spectral", gh::Method::Spectral}},
          CLI::ignore_case));
  if (needs_time) cmd->add_option("-t,--time", o.t, "diffusion time")->required()->check(CLI::PositiveNumber);
}

gh::MetricGraph single_graph(const std::string& path) {
  auto parts = gh::load_graphs(path);
  if (parts.size() != 1) throw gh::DomainError(path + " holds several components; this command needs one graph");
  return std::move(parts.front());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat content of metric graphs: path sums, spectral oracle, surgery and verification"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags; flags win");
  app.require_subcommand(1, 1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads for path enumeration (0: all cores)")
      ->envname("GRAPHHEAT_THREADS")
      ->check(CLI::NonNegativeNumber);

  auto* heat = app.add_subcommand("heat-content", "Q_t with a certified error bound");
  add_common(heat, o, true);

  auto* sweep = app.add_subcommand("sweep", "Q_t over a grid of times, as CSV");
  add_common(sweep, o, false);
  double t_min = 0.0, t_max = 0.0;
  std::size_t steps = 0;
  bool log_grid = false;
  std::string out_path;
  sweep->add_option("--t-min", t_min)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--t-max", t_max)->required()->check(CLI::PositiveNumber);
  sweep->add_option("--steps", steps, "number of grid points")->required()->check(CLI::Range(1, 1'000'000));
  sweep->add_flag("--log", log_grid, "logarithmic spacing");
  sweep->add_option("-o,--output", out_path, "CSV file ('-' for stdout)");

  auto* kernel = app.add_subcommand("kernel", "heat kernel p_t(x, y)");
  add_common(kernel, o, true);
  std::string x_spec, y_spec;
  kernel->add_option("--x", x_spec, "EDGE:OFFSET")->required();
  kernel->add_option("--y", y_spec, "EDGE:OFFSET")->required();

  auto* flux = app.add_subcommand("flux", "heat flow out of a region");
  add_common(flux, o, true);
  std::string region_spec;
  flux->add_option("--region", region_spec, "comma-separated EDGE:A:B intervals")->required();

  auto* deriv = app.add_subcommand("derivative", "derivative of Q_t with respect to an edge length");
  add_common(deriv, o, true);
  gh::EdgeId edge = 0;
  deriv->add_option("--edge", edge)->required();

  auto* surgery = app.add_subcommand("surgery", "transform a graph and write the result");
  surgery->add_option("-g,--graph", o.graph, "graph file (JSON)")->required()->check(CLI::ExistingFile);
  std::string op;
  surgery->add_option("--op", op)
      ->required()
      ->check(CLI::IsMember({"loop-cut", "mirror", "attach", "add-dirichlet", "lengthen", "scale", "subdivide"}));
  std::vector<gh::VertexId> vertices;
  std::optional<gh::EdgeId> op_edge;
  std::optional<gh::VertexId> op_vertex;
  std::string point_spec, pendant_path;
  int copies = 2;
  gh::VertexId root = 0;
  double amount = 0.0, offset = 0.0;
  surgery->add_option("--edge", op_edge, "loop-cut, lengthen, subdivide");
  surgery->add_option("--vertex", op_vertex, "attach, add-dirichlet");
  surgery->add_option("--vertices", vertices, "mirror: reflection set")->delimiter(',');
  surgery->add_option("--copies", copies, "mirror: number of copies")->check(CLI::Range(1, 1000));
  surgery->add_option("--point", point_spec, "add-dirichlet: EDGE:OFFSET instead of a vertex");
  surgery->add_option("--pendant", pendant_path, "attach: pendant graph file")->check(CLI::ExistingFile);
  surgery->add_option("--root", root, "attach: pendant vertex glued to --vertex");
  surgery->add_option("--by,--factor", amount, "lengthen: added length; scale: factor");
  surgery->add_option("--offset", offset, "subdivide: offset from the edge's u end");
  surgery->add_option("-o,--output", out_path, "output graph file ('-' for stdout)");

  auto* verify = app.add_subcommand("verify", "run invariant suites on a graph");
  add_common(verify, o, false);
  gh::cli::Suite suite = gh::cli::Suite::All;
  verify->add_option("--suite", suite)
      ->transform(CLI::CheckedTransformer(std::map<std::string, gh::cli::Suite>{
          {"identities", gh::cli::Suite::Identities},
          {"inequalities", gh::cli::Suite::Inequalities},
          {"oracle", gh::cli::Suite::Oracle},
          {"asymptotics", gh::cli::Suite::Asymptotics},
          {"all", gh::cli::Suite::All}}));
  double verify_mesh = 0.0;
  verify->add_option("--mesh", verify_mesh, "oracle mesh width h (default: chosen from the graph)")
      ->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("oracle-compare", "path sum against the discretized Laplacian");
  add_common(compare, o, true);
  double mesh = 0.0;
  compare->add_option("--mesh", mesh, "mesh width h")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    const gh::EvalConfig cfg = o.config();
    if (*heat) {
      const auto parts = gh::load_graphs(o.graph);
      const gh::HeatValue v = parts.size() == 1 ? gh::heat_content(parts.front(), o.t, cfg)
                                                : gh::heat_content(parts, o.t, cfg);
      fmt::print("value {}\nerror_bound {}\nmethod {}\nterms {}\n", num(v.value), num(v.error_bound),
                 method_name(v.method), v.terms_used);
    } else if (*sweep) {
      if (!(t_max >= t_min)) throw gh::DomainError("--t-max must not be below --t-min");
      const auto parts = gh::load_graphs(o.graph);
      std::string csv = "t,value,error_bound,method\n";
      for (std::size_t i = 0; i < steps; ++i) {
        const double s = steps == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        const double t = log_grid ? t_min * std::pow(t_max / t_min, s) : t_min + s * (t_max - t_min);
        const gh::HeatValue v = parts.size() == 1 ? gh::heat_content(parts.front(), t, cfg)
                                                  : gh::heat_content(parts, t, cfg);
        csv += fmt::format("{},{},{},{}\n", num(t), num(v.value), num(v.error_bound), method_name(v.method));
      }
      write_output(out_path, csv);
    } else if (*kernel) {
      const auto g = single_graph(o.graph);
      const gh::HeatValue v = gh::heat_kernel(g, parse_point(x_spec), parse_point(y_spec), o.t, cfg);
      fmt::print("kernel {}\nerror_bound {}\n", num(v.value), num(v.error_bound));
    } else if (*flux) {
      const auto g = single_graph(o.graph);
      const gh::HeatValue v = gh::boundary_flux(g, parse_region(region_spec), o.t, cfg);
      const double norm = std::sqrt(std::numbers::pi / o.t);
      fmt::print("flux {}\nerror_bound {}\nnormalized {}\n", num(v.value), num(v.error_bound), num(norm * v.value));
    } else if (*deriv) {
      const auto g = single_graph(o.graph);
      const gh::HeatValue v = gh::hadamard_derivative(g, edge, o.t, cfg);
      fmt::print("derivative {}\nerror_bound {}\n", num(v.value), num(v.error_bound));
    } else if (*surgery) {
      const auto g = single_graph(o.graph);
      auto need_edge = [&] {
        if (!op_edge) throw gh::DomainError("--op " + op + " needs --edge");
        return *op_edge;
      };
      auto need_vertex = [&] {
        if (!op_vertex) throw gh::DomainError("--op " + op + " needs --vertex");
        return *op_vertex;
      };
      std::vector<gh::MetricGraph> result;
      if (op == "loop-cut") {
        result.push_back(gh::midpoint_loop_cut(g, need_edge()));
      } else if (op == "mirror") {
        if (vertices.empty()) throw gh::DomainError("--op mirror needs --vertices");
        result.push_back(gh::mirror(g, vertices, copies));
      } else if (op == "attach") {
        if (pendant_path.empty()) throw gh::DomainError("--op attach needs --pendant");
        result.push_back(gh::attach_pendant(g, need_vertex(), gh::load_graph(pendant_path), root));
      } else if (op == "add-dirichlet") {
        result = point_spec.empty() ? gh::add_dirichlet(g, need_vertex())
                                    : gh::add_dirichlet_point(g, parse_point(point_spec));
      } else if (op == "lengthen") {
        result.push_back(gh::lengthen_edge(g, need_edge(), amount));
      } else if (op == "scale") {
        result.push_back(gh::scale(g, amount));
      } else {
        result.push_back(gh::subdivide(g, need_edge(), offset));
      }
      for (const auto& part : result) part.require_valid();
      write_output(out_path, gh::to_json(result));
    } else if (*verify) {
      const auto g = single_graph(o.graph);
      bool ok = true;
      for (const auto& c : gh::cli::run_suite(g, suite, cfg, verify_mesh)) {
        fmt::print("{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
        ok = ok && c.pass;
      }
      return ok ? kOk : kVerifyFailed;
    } else if (*compare) {
      const auto g = single_graph(o.graph);
      gh::EvalConfig path = cfg;
      path.method = gh::Method::PathSum;
      const gh::HeatValue q = gh::heat_content(g, o.t, path);
      const gh::SpectralModel m = gh::build(g, mesh);
      const bool dense = m.has_dense_spectrum();
      const double s = dense ? gh::eigen_heat_content(m, o.t) : gh::stepper_heat_content(m, o.t);
      fmt::print("path_sum {}\nerror_bound {}\nspectral {}\nspectral_method {}\nnodes {}\ngap {}\n", num(q.value),
                 num(q.error_bound), num(s), dense ? "eigen" : "stepper", m.node_count(), num(std::abs(s - q.value)));
    }
  } catch (const gh::BudgetExceeded& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kBudget;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kBadInput;
  }
  return kOk;
}
