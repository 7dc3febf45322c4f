#include "revtp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "revtp/error.hpp"
#include "revtp/io.hpp"
#include "revtp/service.hpp"
#include "revtp/simulation.hpp"

namespace revtp {

namespace {

std::string join(const Vector& v) {
  std::string s;
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_number(v[k]);
  return "(" + s + ")";
}

template <class Ints>
std::string join_labels(const Ints& labels, const char* sep = ",") {
  std::string s;
  for (size_t k = 0; k < labels.size(); ++k) s += (k ? sep : "") + std::to_string(labels[k]);
  return s;
}

void print_plan(std::ostream& out, const Matrix& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? " " : "") << format_number(x(i, j));
    out << '\n';
  }
}

Json parse_json_arg(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid JSON argument: ") + e.what());
  }
}

Vector parse_vector_arg(const std::string& text) {
  std::vector<double> values;
  try {
    for (const auto& f : split_csv_line(text)) values.push_back(std::stod(f));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::kParse, "expected comma-separated numbers, got '" + text + "'");
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int cmd_solve(const std::string& path, bool json, std::ostream& out) {
  const TransportInstance inst = load_instance(path);
  const ReducedObjective obj = reduce_objective(inst);
  const ReducedLpp lpp = build_constraints(inst.situation());
  const Solution sol = solve_max(lpp, obj.coefficients());
  const TransportPlan plan = reconstruct_plan(inst.situation(), sol.vertex.point);
  const PlanCost cost = plan_cost(inst, plan);
  if (json) {
    out << Json{{"plan", to_json(plan.x)},
                {"free_vars", to_json(sol.vertex.point)},
                {"active_set", sol.vertex.active_set},
                {"active_pair", sol.active_pair},
                {"cost", cost.raw},
                {"normalized_cost", cost.normalized}}
               .dump(2)
        << '\n';
    return 0;
  }
  out << "plan:\n";
  print_plan(out, plan.x);
  out << "free variables: " << join(sol.vertex.point) << '\n'
      << "active constraints: " << join_labels(sol.vertex.active_set) << '\n'
      << "active pair: " << join_labels(sol.active_pair, "-") << '\n'
      << "cost: " << format_number(cost.raw) << '\n'
      << "normalized cost: " << format_number(cost.normalized) << '\n';
  return 0;
}

int cmd_reduce(const std::string& path, bool json, std::ostream& out) {
  const TransportInstance inst = load_instance(path);
  const ReducedObjective obj = reduce_objective(inst);
  const Unlv u = unlv(obj.coefficients());
  const ReducedLpp lpp = build_constraints(inst.situation());
  if (json) {
    out << Json{{"ctilde", to_json(obj.ctilde)},
                {"constant", obj.constant(inst.situation())},
                {"unlv", to_json(u.e())},
                {"constraints", to_json(lpp)}}
               .dump(2)
        << '\n';
    return 0;
  }
  out << "ctilde: " << join(obj.coefficients()) << '\n'
      << "constant: " << format_number(obj.constant(inst.situation())) << '\n'
      << "unlv: " << join(u.e()) << '\n'
      << "constraints:\n";
  for (int k = 0; k < lpp.rows(); ++k) {
    out << "  " << k + 1 << ": " << join(Vector(lpp.lhs.row(k).transpose())) << " . x <= "
        << format_number(lpp.rhs[k]) << '\n';
  }
  return 0;
}

int cmd_classify(const std::string& dms_text, bool json, std::ostream& out) {
  const Dms dms = dms_from_json(parse_json_arg(dms_text));
  const TrClassification tr = classify_tr(dms);
  if (json) {
    out << to_json(tr).dump(2) << '\n';
    return 0;
  }
  out << "active constraints: {" << join_labels(tr.active_constraints) << "}\n"
      << "vertex ranks: " << join_labels(tr.vertex_ranks) << '\n'
      << "general rank: " << tr.general_rank << '\n'
      << "average rank: " << format_number(tr.average_rank) << '\n'
      << "average weight: " << format_number(tr.average_weight) << '\n';
  if (tr.type_id) out << "type: " << *tr.type_id << " (group " << *tr.group_id << ")\n";
  return 0;
}

int cmd_polygon(int m, int n, double rho, bool json, std::ostream& out) {
  const Dms dms = polygon_dms(m, n, rho);
  if (json) {
    out << to_json(dms).dump(2) << '\n';
    return 0;
  }
  out << "supply: " << join(dms.supply()) << '\n' << "demand: " << join(dms.demand()) << '\n';
  return 0;
}

int cmd_estimate(const std::string& path, std::optional<int> window, bool json,
                 std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path);
  const auto rows = read_observation_csv(in);
  if (rows.empty()) throw Error(ErrorKind::kNoObservations, "observation log is empty");
  EstimateState state(free_dim(rows.front().dms.m(), rows.front().dms.n()), window);
  std::vector<Observation> observations;
  for (const auto& row : rows) {
    observations.push_back(make_observation(row.dms, row.free_vars, state.count() + 1));
    state.ingest(observations.back());
  }
  if (json) {
    out << estimate_json(state).dump(2) << '\n';
    return 0;
  }
  out << "step,pair,weight,sums,estimate\n";
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto& obs = observations[k];
    const auto& h = state.history()[k];
    out << rows[k].step << ',' << join_labels(obs.active_pair, "-") << ','
        << format_number(obs.weight) << ",\"" << join(h.sums) << "\",\""
        << (h.estimate ? join(*h.estimate) : std::string("undefined")) << "\"\n";
  }
  return 0;
}

struct SimulateOptions {
  bool fixture = false;
  std::string fixture_dir;
  std::string costs;
  std::string truth;
  int m = 2;
  int n = 3;
  int steps = 25;
  int lo = 1;
  int hi = 100;
  std::uint64_t seed = 0;
  std::optional<int> window;
  std::string out_dir;
};

int cmd_simulate(const SimulateOptions& o, bool json, std::ostream& out) {
  ExperimentConfig config;
  if (o.fixture) {
    const std::filesystem::path dir =
        o.fixture_dir.empty() ? default_fixture_dir() : std::filesystem::path(o.fixture_dir);
    config = fixture_config(load_fixture(dir));
  } else {
    config.m = o.m;
    config.n = o.n;
    config.steps = o.steps;
    config.range = {o.lo, o.hi};
    config.seed = o.seed;
    if (!o.truth.empty()) {
      config.truth = parse_vector_arg(o.truth);
    } else if (!o.costs.empty()) {
      config.truth = load_instance(o.costs).costs();
    } else {
      throw Error(ErrorKind::kParse, "simulate needs --fixture, --costs or --truth");
    }
  }
  config.window = o.window;
  const ExperimentResult result = run_experiment(config);

  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream(std::filesystem::path(o.out_dir) / "result.csv") << result_csv(result);
    std::ofstream(std::filesystem::path(o.out_dir) / "result.json")
        << result_json(result).dump(2) << '\n';
  }
  if (json) {
    out << result_json(result).dump(2) << '\n';
    return 0;
  }
  out << "steps: " << result.records.size() << '\n'
      << "truth: " << join(result.truth_unlv) << '\n'
      << "final estimate: " << join(result.final_estimate) << '\n'
      << "match rate: " << format_number(result.match_rate) << '\n'
      << "stopping step: "
      << (result.stopping_step ? std::to_string(*result.stopping_step) : std::string("none"))
      << '\n';
  return 0;
}

}  // namespace

int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reverse transportation problem toolkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable JSON output");

  std::string path;
  auto* solve = app.add_subcommand("solve", "Optimal plan of a transport instance");
  solve->add_option("instance", path, "Instance JSON file")->required();
  auto* reduce = app.add_subcommand("reduce", "Reduced objective and constraints of an instance");
  reduce->add_option("instance", path, "Instance JSON file")->required();

  std::string dms_text;
  auto* classify = app.add_subcommand("classify", "Classify the region of a 2x3 situation");
  classify->add_option("--dms", dms_text, R"(Situation JSON: {"supply":[..],"demand":[..]})")
      ->required();

  int m = 2;
  int n = 3;
  double rho = 1.0;
  auto* polygon = app.add_subcommand("polygon", "Situation whose region uses every constraint");
  polygon->add_option("m", m)->required();
  polygon->add_option("n", n)->required();
  polygon->add_option("rho", rho)->required();

  std::optional<int> window;
  auto* estimate = app.add_subcommand("estimate", "Estimate trace from an observation CSV");
  estimate->add_option("log", path, "Observation CSV")->required();
  estimate->add_option("--window", window, "Sliding window size");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulated decision-taker experiment");
  simulate->add_flag("--fixture", sim.fixture, "Replay the bundled study situations");
  simulate->add_option("--fixture-dir", sim.fixture_dir, "Directory of fixture files");
  simulate->add_option("--costs", sim.costs, "Instance JSON whose costs are the hidden truth");
  simulate->add_option("--truth", sim.truth, "Hidden objective direction, comma-separated");
  simulate->add_option("--m", sim.m);
  simulate->add_option("--n", sim.n);
  simulate->add_option("--steps", sim.steps);
  simulate->add_option("--lo", sim.lo, "Lowest drawn supply/demand");
  simulate->add_option("--hi", sim.hi, "Highest drawn supply/demand");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--window", sim.window, "Sliding window size");
  simulate->add_option("--out", sim.out_dir, "Directory for result.csv and result.json");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  if (const char* env = std::getenv("REVTP_PORT"); env && *env) port = std::atoi(env);
  if (const char* env = std::getenv("REVTP_DATA_DIR"); env && *env) data_dir = env;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP JSON service");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--data-dir", data_dir, "Directory for persistent sessions");

  for (auto* sub : {solve, reduce, classify, polygon, estimate, simulate}) {
    sub->add_flag("--json", json, "Machine-readable JSON output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*solve) return cmd_solve(path, json, out);
    if (*reduce) return cmd_reduce(path, json, out);
    if (*classify) return cmd_classify(dms_text, json, out);
    if (*polygon) return cmd_polygon(m, n, rho, json, out);
    if (*estimate) return cmd_estimate(path, window, json, out);
    if (*simulate) return cmd_simulate(sim, json, out);
    if (*serve_cmd) {
      Service service(data_dir.empty() ? std::nullopt
                                       : std::optional<std::filesystem::path>(data_dir));
      HttpServer server(service);
      const int bound = server.bind(host, port);
      out << "listening on " << host << ':' << bound << std::endl;
      server.run();
      return 0;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace revtp
