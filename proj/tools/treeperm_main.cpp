#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "treeperm/oracle.hpp"
#include "treeperm/generators.hpp"
#include "treeperm/report.hpp"
#include "treeperm/treeperm.hpp"

using namespace treeperm;

namespace {

enum Exit { kOk = 0, kUsage = 2, kFormat = 3, kCap = 4, kMismatch = 5 };

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

Heuristic parse_heuristic(const std::string& s) {
  if (s == "min-fill") return Heuristic::MinFill;
  if (s == "min-degree") return Heuristic::MinDegree;
  throw std::invalid_argument("unknown heuristic '" + s + "'");
}

std::vector<Integer> parse_integer_list(const std::string& s) {
  std::vector<Integer> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_scalar<Integer>(item));
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string command_echo(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

// Part sizes of the graph a decomposition file refers to.
template <Ring T>
std::vector<std::size_t> graph_part_sizes(const SparseTensor<T>& t, DecompositionGraph g) {
  if (g == DecompositionGraph::Bipartite) return t.lengths();
  if (t.order() != 2) throw IncompatibleInput(std::string(to_string(g)) + " decompositions need a matrix");
  return {g == DecompositionGraph::Column ? t.length(1) : std::max(t.length(0), t.length(1))};
}

template <Ring T>
T run_oracle(Function f, const SparseTensor<T>& t) {
  const FunctionSignature sig = signature_for(f, t.order());
  switch (f) {
  case Function::Perm: return t.is_square() ? oracle::ryser_permanent(t) : T(0);
  case Function::Det: {
    if (!t.is_square()) return T(0);
    Rational d = oracle::exact_determinant(t);
    if constexpr (std::is_same_v<T, Integer>) return d.get_num();
    else return d;
  }
  default: return oracle::naive_generalized(t, sig);
  }
}

struct ComputeArgs {
  std::string fn, input, td, td_graph = "bipartite", heuristic = "min-fill", stats;
  bool check = false;
  unsigned threads = 1;
};

template <Ring T>
int compute_with(const ComputeArgs& a, const SparseTensor<T>& t, const std::string& bytes, const std::string& echo) {
  const auto start = std::chrono::steady_clock::now();
  const Function f = parse_function(a.fn);
  DecompositionSource src;
  src.graph = parse_decomposition_graph(a.td_graph);
  src.heuristic = parse_heuristic(a.heuristic);
  if (!a.td.empty()) {
    auto sizes = graph_part_sizes(t, src.graph);
    src.td = read_decomposition(read_file(a.td), sizes);
  }
  EngineOptions opt;
  opt.threads = a.threads;
  auto out = compute(f, t, src, opt);
  const std::string value = to_string(out.value);
  std::cout << value << '\n';
  int code = kOk;
  if (a.check) {
    T expected = run_oracle(f, t);
    if (expected == out.value) {
      std::cout << "oracle: match\n";
    } else {
      std::cout << "oracle: MISMATCH (oracle gives " << to_string(expected) << ")\n";
      code = kMismatch;
    }
  }
  if (!a.stats.empty()) {
    auto j = stats_json(to_string(f), t.length(0), t.order(), out.stats, value);
    j["command"] = echo;
    j["input_digest"] = input_digest(bytes);
    j["engine"] = out.engine;
    j["wall_time_ms"] = elapsed_ms(start);
    write_output(a.stats, j.dump(2) + "\n");
  }
  return code;
}

int cmd_compute(const ComputeArgs& a, const std::string& echo) {
  const std::string bytes = read_file(a.input);
  auto t = parse_tensor<Rational>(bytes);
  bool integral = true;
  for (const auto& e : t.entries()) integral = integral && e.value.get_den() == 1;
  if (!integral) return compute_with(a, t, bytes, echo);
  std::vector<SparseTensor<Integer>::Entry> ints;
  for (const auto& e : t.entries()) ints.push_back({e.index, e.value.get_num()});
  return compute_with(a, SparseTensor<Integer>(t.lengths(), std::move(ints)), bytes, echo);
}

struct MvolArgs {
  std::string input, td, heuristic = "min-fill", stats;
  std::size_t max_extra = 4;
  bool check = false;
  unsigned threads = 1;
};

int cmd_mvol(const MvolArgs& a, const std::string& echo) {
  const auto start = std::chrono::steady_clock::now();
  const std::string bytes = read_file(a.input);
  auto zs = parse_zonotopes(bytes);
  MixedVolumeOptions opt;
  opt.max_extra_directions = a.max_extra;
  opt.heuristic = parse_heuristic(a.heuristic);
  opt.engine.threads = a.threads;
  std::optional<TreeDecomposition> td;
  if (!a.td.empty()) {
    auto idx = index_directions(zs);
    std::vector<std::size_t> sizes{zs.size(), idx.directions.size()};
    td = read_decomposition(read_file(a.td), sizes);
  }
  auto r = mixed_volume_few_directions(zs, td, opt);
  const std::string value = to_string(r.value);
  std::cout << value << '\n';
  int code = kOk;
  if (a.check) {
    Rational expected = oracle::naive_mixed_volume(zs);
    if (expected == r.value) {
      std::cout << "oracle: match\n";
    } else {
      std::cout << "oracle: MISMATCH (oracle gives " << to_string(expected) << ")\n";
      code = kMismatch;
    }
  }
  if (!a.stats.empty()) {
    nlohmann::json j = {{"function", "mvol"},
                        {"n", zs.dimension()},
                        {"directions", r.directions},
                        {"subsets", r.subsets},
                        {"nonsingular", r.nonsingular},
                        {"width_multi_part", r.width_multi_part},
                        {"ring_mults", r.ring_mults},
                        {"result", value},
                        {"command", echo},
                        {"input_digest", input_digest(bytes)},
                        {"wall_time_ms", elapsed_ms(start)}};
    write_output(a.stats, j.dump(2) + "\n");
  }
  return code;
}

struct GenArgs {
  std::size_t n = 0, w1 = 1, w2 = 1, m = 3, order = 2;
  long lo = 1, hi = 9;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string a, b, delta = "0", output;
};

struct GraphArgs {
  std::string input, kind = "bipartite", heuristic = "min-fill", output;
};

template <Ring T>
LabeledGraph graph_of(const SparseTensor<T>& t, const std::string& kind) {
  auto g = parse_decomposition_graph(kind);
  if (g != DecompositionGraph::Bipartite && t.order() != 2)
    throw IncompatibleInput(kind + " graphs need a matrix");
  return decomposition_graph(t, g);
}

struct BenchArgs {
  std::string fn = "perm", sizes = "500,1000,2000", td_graph = "column";
  std::size_t w1 = 1, w2 = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

int cmd_bench(const BenchArgs& a) {
  const Function f = parse_function(a.fn);
  const auto graph = parse_decomposition_graph(a.td_graph);
  for (const auto& nv : parse_integer_list(a.sizes)) {
    const std::size_t n = nv.get_ui();
    Rng rng(a.seed);
    auto m = band_matrix<Integer>(n, a.w1, a.w2, rng);
    DecompositionSource src;
    src.graph = graph;
    if (graph == DecompositionGraph::Column) src.td = band_column_decomposition(n, a.w1, a.w2);
    else if (graph == DecompositionGraph::Symmetrized) src.td = band_symmetrized_decomposition(n, a.w1, a.w2);
    EngineOptions opt;
    opt.threads = a.threads;
    const auto start = std::chrono::steady_clock::now();
    auto out = compute(f, m, src, opt);
    nlohmann::json j = {{"n", n},
                        {"function", to_string(f)},
                        {"engine", out.engine},
                        {"width_single_part", out.stats.width_single_part},
                        {"width_multi_part", out.stats.width_multi_part},
                        {"nodes", out.stats.nodes},
                        {"ring_mults", out.stats.ring_mults},
                        {"result_digits", to_string(out.value).size()},
                        {"wall_time_ms", elapsed_ms(start)}};
    std::cout << j.dump() << '\n';
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact permanents, determinants and related functions of sparse tensors via tree decompositions"};
  app.require_subcommand(1);
  const std::string echo = command_echo(argc, argv);
  std::function<int()> action;

  ComputeArgs ca;
  auto* compute_cmd = app.add_subcommand("compute", "Evaluate a function of a tensor");
  compute_cmd->add_option("--fn", ca.fn, "perm | det | disc | hyperdet | mdperm")->required();
  compute_cmd->add_option("--input", ca.input, "Tensor file")->required();
  compute_cmd->add_option("--td", ca.td, "PACE .td decomposition file");
  compute_cmd->add_option("--td-graph", ca.td_graph, "Graph the decomposition refers to: bipartite | column | symmetrized");
  compute_cmd->add_option("--heuristic", ca.heuristic, "min-fill | min-degree (used when --td is absent)");
  compute_cmd->add_flag("--oracle", ca.check, "Also run the brute-force oracle and compare");
  compute_cmd->add_option("--stats", ca.stats, "Write run statistics as JSON to this file");
  compute_cmd->add_option("--threads", ca.threads, "Worker threads")->check(CLI::PositiveNumber);
  compute_cmd->callback([&] { action = [&] { return cmd_compute(ca, echo); }; });

  MvolArgs ma;
  auto* mvol_cmd = app.add_subcommand("mvol", "Mixed volume of zonotopes with few edge directions");
  mvol_cmd->add_option("--input", ma.input, "Zonotope file")->required();
  mvol_cmd->add_option("--td", ma.td, "PACE .td decomposition of the edge graph");
  mvol_cmd->add_option("--heuristic", ma.heuristic, "min-fill | min-degree");
  mvol_cmd->add_option("--max-extra-directions", ma.max_extra, "Cap on |U| - n");
  mvol_cmd->add_flag("--oracle", ma.check, "Also run the generator-enumeration oracle");
  mvol_cmd->add_option("--stats", ma.stats, "Write run statistics as JSON to this file");
  mvol_cmd->add_option("--threads", ma.threads, "Worker threads")->check(CLI::PositiveNumber);
  mvol_cmd->callback([&] { action = [&] { return cmd_mvol(ma, echo); }; });

  GenArgs ga;
  auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--output", ga.output, "Output file (default stdout)");
    c->add_option("--seed", ga.seed, "Random seed");
  };
  auto* band = gen_cmd->add_subcommand("band", "Band matrix with -w1 <= j - i <= w2");
  band->add_option("--n", ga.n)->required();
  band->add_option("--w1", ga.w1);
  band->add_option("--w2", ga.w2);
  band->add_option("--lo", ga.lo);
  band->add_option("--hi", ga.hi);
  add_common(band);
  band->callback([&] {
    action = [&] {
      Rng rng(ga.seed);
      write_output(ga.output, write_tensor(band_matrix<Integer>(ga.n, ga.w1, ga.w2, rng, ga.lo, ga.hi)));
      return kOk;
    };
  });
  auto* grid = gen_cmd->add_subcommand("grid", "m^2 x m^2 matrix whose symmetrized graph contains the m x m grid");
  grid->add_option("--m", ga.m)->required();
  add_common(grid);
  grid->callback([&] {
    action = [&] {
      write_output(ga.output, write_tensor(grid_matrix<Integer>(ga.m)));
      return kOk;
    };
  });
  auto* two = gen_cmd->add_subcommand("two-per-row", "Random matrix with at most two nonzeros per row");
  two->add_option("--n", ga.n)->required();
  two->add_option("--lo", ga.lo);
  two->add_option("--hi", ga.hi);
  add_common(two);
  two->callback([&] {
    action = [&] {
      Rng rng(ga.seed);
      write_output(ga.output, write_tensor(two_per_row_matrix<Integer>(ga.n, rng, ga.lo, ga.hi)));
      return kOk;
    };
  });
  auto* rnd = gen_cmd->add_subcommand("random", "Random sparse n x ... x n tensor");
  rnd->add_option("--n", ga.n)->required();
  rnd->add_option("--order", ga.order)->check(CLI::Range(2, 8));
  rnd->add_option("--density", ga.density)->check(CLI::Range(0.0, 1.0));
  rnd->add_option("--lo", ga.lo);
  rnd->add_option("--hi", ga.hi);
  add_common(rnd);
  rnd->callback([&] {
    action = [&] {
      Rng rng(ga.seed);
      auto t = random_tensor<Integer>(std::vector<std::size_t>(ga.order, ga.n), ga.density, rng, ga.lo, ga.hi);
      write_output(ga.output, write_tensor(t));
      return kOk;
    };
  });
  auto* ss = gen_cmd->add_subcommand("subset-sum", "Zonotope system encoding zero-sum subsets of a");
  ss->add_option("--a", ga.a, "Comma-separated integers")->required();
  ss->add_option("--delta", ga.delta, "Last coefficient");
  add_common(ss);
  ss->callback([&] {
    action = [&] {
      auto zs = subset_sum_instance(parse_integer_list(ga.a), parse_scalar<Integer>(ga.delta));
      write_output(ga.output, write_zonotopes(zs));
      return kOk;
    };
  });
  auto* few = gen_cmd->add_subcommand("few-directions", "z^i = [0,1]a_i e_i + [0,1]b_i e");
  few->add_option("--a", ga.a, "Comma-separated integers")->required();
  few->add_option("--b", ga.b, "Comma-separated integers")->required();
  add_common(few);
  few->callback([&] {
    action = [&] {
      write_output(ga.output, write_zonotopes(few_directions_instance(parse_integer_list(ga.a), parse_integer_list(ga.b))));
      return kOk;
    };
  });

  GraphArgs gr;
  auto* graph_cmd = app.add_subcommand("graph", "Export a tensor graph in PACE .gr format");
  graph_cmd->add_option("--input", gr.input, "Tensor file")->required();
  graph_cmd->add_option("--kind", gr.kind, "bipartite | column | symmetrized");
  graph_cmd->add_option("--output", gr.output, "Output file (default stdout)");
  graph_cmd->callback([&] {
    action = [&] {
      auto t = parse_tensor<Rational>(read_file(gr.input));
      write_output(gr.output, write_pace_graph(graph_of(t, gr.kind)));
      return kOk;
    };
  });

  auto* dec_cmd = app.add_subcommand("decompose", "Heuristic tree decomposition in PACE .td format");
  dec_cmd->add_option("--input", gr.input, "Tensor file")->required();
  dec_cmd->add_option("--graph", gr.kind, "bipartite | column | symmetrized");
  dec_cmd->add_option("--heuristic", gr.heuristic, "min-fill | min-degree");
  dec_cmd->add_option("--output", gr.output, "Output file (default stdout)");
  dec_cmd->callback([&] {
    action = [&] {
      auto t = parse_tensor<Rational>(read_file(gr.input));
      auto g = graph_of(t, gr.kind);
      auto td = heuristic_decomposition(g, parse_heuristic(gr.heuristic));
      write_output(gr.output, write_decomposition(td, g.part_sizes()));
      std::cerr << "width " << td.width() << " (" << to_string(td.convention()) << "), " << td.size() << " bags\n";
      return kOk;
    };
  });

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "Time band-matrix runs, one JSON line per size");
  bench_cmd->add_option("--fn", ba.fn, "perm | det");
  bench_cmd->add_option("--sizes", ba.sizes, "Comma-separated matrix sizes");
  bench_cmd->add_option("--w1", ba.w1);
  bench_cmd->add_option("--w2", ba.w2);
  bench_cmd->add_option("--td-graph", ba.td_graph, "bipartite | column | symmetrized");
  bench_cmd->add_option("--seed", ba.seed);
  bench_cmd->add_option("--threads", ba.threads)->check(CLI::PositiveNumber);
  bench_cmd->callback([&] { action = [&] { return cmd_bench(ba); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const InvalidDecomposition& e) {
    std::cerr << "error: invalid decomposition: " << e.what() << '\n';
    return kFormat;
  } catch (const WidthTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const DirectionCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const std::invalid_argument& e) {
    // IncompatibleInput and bad parameter values.
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  }
}
