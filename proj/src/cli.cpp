#include "netsample/cli.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "netsample/allocator.hpp"
#include "netsample/bounds.hpp"
#include "netsample/equilibrium.hpp"
#include "netsample/errors.hpp"
#include "netsample/experiments.hpp"
#include "netsample/graph.hpp"
#include "netsample/montecarlo.hpp"

namespace netsample::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

// 12 significant digits everywhere, so CSV and JSON carry the same values.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double rounded(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(fmt(x));
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return rounded(x);
}

Json vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void write_csv(std::ostream& out) const {
    write_row(out, header_);
    for (const auto& row : rows_) write_row(out, row);
  }

  // Numeric-looking cells become JSON numbers, "true"/"false" booleans.
  Json to_json() const {
    Json arr = Json::array();
    for (const auto& row : rows_) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < header_.size(); ++c) obj[header_[c]] = cell(row[c]);
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  static void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const bool quote = row[c].find_first_of(",\" ") != std::string::npos;
      if (quote) {
        out << '"';
        for (char ch : row[c]) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << row[c];
      }
    }
    out << '\n';
  }

  static Json cell(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    if (s.empty()) return nullptr;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) {
      if (s.find_first_of(".eE") == std::string::npos && s.find("inf") == std::string::npos &&
          s.find("nan") == std::string::npos)
        return std::stoll(s);
      return value;
    }
    return s;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct GraphSource {
  std::string path;
  GraphSpec spec;
};

struct InfluenceOptions {
  std::optional<double> alpha;
  std::optional<double> weights_range;
};

struct OutputOptions {
  std::string out;
  std::string format = "csv";
  bool timestamp = false;
};

struct ResolvedGraph {
  Graph graph;
  std::optional<InfluenceFactors> file_weights;
  std::string label;
};

void add_graph_options(CLI::App* sub, GraphSource& src) {
  sub->add_option("--graph", src.path, "Edge-list file ('u v' or 'u v w' per line)");
  sub->add_option("--family", src.spec.family, "Generated family instead of --graph")
      ->check(CLI::IsMember({"clique", "star", "hypercube", "rr", "er", "ba"}));
  sub->add_option("--n", src.spec.n, "Number of nodes");
  sub->add_option("--d", src.spec.d, "Degree (rr) or dimension (hypercube)");
  sub->add_option("--p", src.spec.p, "Edge probability (er)");
  sub->add_option("--attach", src.spec.attach, "Attachment count (ba)");
}

void add_influence_options(CLI::App* sub, InfluenceOptions& inf) {
  sub->add_option("--alpha", inf.alpha, "Uniform influence factor");
  sub->add_option("--weights-range", inf.weights_range,
                  "Draw per-edge influence factors from U[0, c]");
}

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_option("--out", o.out, "Output file (default: stdout)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--timestamp", o.timestamp, "Record the wall-clock time in JSON metadata");
}

ResolvedGraph resolve_graph(const GraphSource& src, std::uint64_t seed, std::ostream& err) {
  if (!src.path.empty() && !src.spec.family.empty())
    throw CLI::ValidationError("--graph and --family are mutually exclusive");
  if (!src.path.empty()) {
    std::ifstream in(src.path);
    if (!in) throw std::invalid_argument("cannot open graph file '" + src.path + "'");
    LoadedGraph loaded = load_edge_list(in);
    if (loaded.self_loops_dropped)
      err << "warning: dropped " << loaded.self_loops_dropped << " self-loop(s)\n";
    return {std::move(loaded.graph), std::move(loaded.weights), src.path};
  }
  if (src.spec.family.empty()) throw CLI::ValidationError("one of --graph or --family is required");
  GraphSpec spec = src.spec;
  spec.seed = seed;
  return {make_graph(spec), std::nullopt, spec.describe()};
}

InfluenceFactors resolve_influence(const InfluenceOptions& inf, const ResolvedGraph& rg,
                                   std::uint64_t seed) {
  if (inf.alpha && inf.weights_range)
    throw CLI::ValidationError("--alpha and --weights-range are mutually exclusive");
  if (inf.alpha) return InfluenceFactors::uniform(*inf.alpha);
  if (inf.weights_range)
    return InfluenceFactors::random_uniform(rg.graph, *inf.weights_range, derive_seed(seed, 0x5eed));
  if (rg.file_weights) return *rg.file_weights;
  throw CLI::ValidationError("influence factors required: --alpha, --weights-range, or a weighted edge list");
}

std::string describe_influence(const InfluenceOptions& inf, const ResolvedGraph& rg) {
  if (inf.alpha) return "alpha=" + fmt(*inf.alpha);
  if (inf.weights_range) return "uniform[0," + fmt(*inf.weights_range) + "]";
  return rg.file_weights ? "file" : "none";
}

Json metadata(const std::string& command, std::uint64_t seed, double tol, const OutputOptions& o) {
  Json meta = Json::object();
  meta["command"] = command;
  meta["version"] = kVersion;
  meta["seed"] = seed;
  meta["tol"] = tol;
  if (o.timestamp) {
    const std::time_t now = std::time(nullptr);
    std::ostringstream s;
    s << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    meta["timestamp"] = s.str();
  }
  return meta;
}

// Writes either the CSV table or the JSON document to --out or `out`.
void emit(const OutputOptions& o, std::ostream& out, const Table& table, Json doc) {
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw std::invalid_argument("cannot open output file '" + o.out + "'");
  }
  std::ostream& sink = o.out.empty() ? out : file;
  if (o.format == "json") {
    sink << doc.dump(2) << '\n';
  } else {
    table.write_csv(sink);
  }
}

std::vector<std::string> bounds_header() {
  return {"trivial_lower", "trivial_upper", "degree_lower", "degree_upper",
          "general_lower", "general_upper", "spectral_upper"};
}

std::vector<std::string> bounds_cells(const BoundsReport& b) {
  return {fmt(b.trivial_lower),
          fmt(b.trivial_upper),
          b.degree ? fmt(b.degree->lower) : "",
          b.degree ? fmt(b.degree->upper) : "",
          fmt(b.general.lower),
          fmt(b.general.upper),
          fmt(b.spectral.bound)};
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (auto dots = item.find(".."); dots != std::string::npos) {
      // a..b:step
      const auto colon = item.find(':', dots);
      const std::size_t lo = std::stoul(item.substr(0, dots));
      const std::size_t hi = std::stoul(item.substr(dots + 2, colon - dots - 2));
      const std::size_t step = colon == std::string::npos ? 1 : std::stoul(item.substr(colon + 1));
      if (step == 0) throw CLI::ValidationError("range step must be positive");
      for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
    } else {
      out.push_back(std::stoul(item));
    }
  }
  if (out.empty()) throw CLI::ValidationError("empty size list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty value list");
  return out;
}

std::optional<double> estimator_for(const GraphSource& src, const Graph& g, double alpha) {
  const std::string& f = src.spec.family;
  if (!src.path.empty()) return std::nullopt;
  if (f == "clique") return family_estimator(Family::Clique, g.num_nodes(), 0, alpha);
  if (f == "star") return family_estimator(Family::Star, g.num_nodes(), 0, alpha);
  if (f == "hypercube") return family_estimator(Family::Hypercube, g.num_nodes(), src.spec.d, alpha);
  if (f == "rr" && alpha > 0)
    return family_estimator(Family::RandomRegular, g.num_nodes(), src.spec.d, alpha);
  return std::nullopt;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total sample complexity of opinion formation on networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<double> m_eps;
  app.add_option("--seed", seed, "Base RNG seed")->capture_default_str();
  app.add_option("--tol", tol, "Relative duality-gap tolerance")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for sweeps and simulations");
  app.add_option("--m-eps", m_eps, "Scale normalized allocations by M(eps) and round up");
  // Accept the common flags after the subcommand name as well.
  app.fallthrough();

  std::function<int()> action;

  // generate -------------------------------------------------------------
  GraphSource gen_src;
  std::optional<double> gen_weights;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Emit a generated graph as an edge list");
  add_graph_options(gen, gen_src);
  gen->add_option("--weights-range", gen_weights, "Append U[0, c] influence factors as a third column");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");
  gen->callback([&] {
    action = [&] {
      if (gen_src.spec.family.empty()) throw CLI::ValidationError("--family is required");
      GraphSpec spec = gen_src.spec;
      spec.seed = seed;
      const Graph g = make_graph(spec);
      std::optional<InfluenceFactors> w;
      if (gen_weights) w = InfluenceFactors::random_uniform(g, *gen_weights, derive_seed(seed, 0x5eed));
      std::ofstream file;
      if (!gen_out.empty()) {
        file.open(gen_out);
        if (!file) throw std::invalid_argument("cannot open output file '" + gen_out + "'");
      }
      write_edge_list(gen_out.empty() ? out : file, g, w ? &*w : nullptr);
      return kExitOk;
    };
  });

  // solve ----------------------------------------------------------------
  GraphSource solve_src;
  InfluenceOptions solve_inf;
  OutputOptions solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "Optimal sample allocation with KKT certificate");
  add_graph_options(solve_cmd, solve_src);
  add_influence_options(solve_cmd, solve_inf);
  add_output_options(solve_cmd, solve_out);
  solve_cmd->callback([&] {
    action = [&] {
      const ResolvedGraph rg = resolve_graph(solve_src, seed, err);
      const InfluenceFactors v = resolve_influence(solve_inf, rg, seed);
      const EquilibriumWeights ew = compute_weights(build_game_matrix(rg.graph, v));
      BarrierOptions opts;
      opts.tol = tol;
      const Allocation alloc = solve(ew, opts);
      const KktReport kkt = verify_kkt(alloc, ew, 10 * tol);
      std::optional<IntegerAllocation> ints;
      if (m_eps) ints = integer_round(alloc.m, *m_eps);

      std::vector<std::string> header{"agent", "degree", "m", "lambda"};
      if (ints) header.push_back("m_int");
      Table table(header);
      for (NodeId i = 0; i < rg.graph.num_nodes(); ++i) {
        std::vector<std::string> row{std::to_string(i), std::to_string(rg.graph.degree(i)),
                                     fmt(alloc.m[i]), fmt(alloc.lambda[i])};
        if (ints) row.push_back(std::to_string(ints->counts[i]));
        table.add(std::move(row));
      }

      Json doc = Json::object();
      doc["metadata"] = metadata("solve", seed, tol, solve_out);
      doc["graph"] = {{"source", rg.label}, {"n", rg.graph.num_nodes()}, {"edges", rg.graph.num_edges()},
                      {"influence", describe_influence(solve_inf, rg)}};
      doc["m"] = vector_json(alloc.m);
      doc["objective"] = number(alloc.objective);
      doc["lambda"] = vector_json(alloc.lambda);
      doc["gap"] = number(alloc.gap);
      doc["status"] = std::string(to_string(alloc.status));
      doc["kkt"] = {{"stationarity", number(kkt.stationarity)},
                    {"complementarity", number(kkt.complementarity)},
                    {"feasibility", number(kkt.feasibility)},
                    {"passed", kkt.passed}};
      if (ints) {
        doc["m_eps"] = *m_eps;
        doc["m_int"] = ints->counts;
        doc["total_int"] = ints->total;
      }
      emit(solve_out, out, table, doc);
      if (!alloc.ok()) {
        err << "error: solver status " << to_string(alloc.status) << ": " << alloc.diagnostics << '\n';
        return kExitInvariant;
      }
      if (!kkt.passed) {
        err << "error: KKT certificate failed (stationarity " << kkt.stationarity << ", gap " << kkt.gap
            << ")\n";
        return kExitInvariant;
      }
      return kExitOk;
    };
  });

  // bounds ---------------------------------------------------------------
  GraphSource bounds_src;
  InfluenceOptions bounds_inf;
  OutputOptions bounds_out;
  bool bounds_with_opt = false;
  auto* bounds_cmd = app.add_subcommand("bounds", "Analytic bounds on the total sample complexity");
  add_graph_options(bounds_cmd, bounds_src);
  add_influence_options(bounds_cmd, bounds_inf);
  add_output_options(bounds_cmd, bounds_out);
  bounds_cmd->add_flag("--with-optimum", bounds_with_opt, "Also solve and check the sandwich");
  bounds_cmd->callback([&] {
    action = [&] {
      const ResolvedGraph rg = resolve_graph(bounds_src, seed, err);
      const InfluenceFactors v = resolve_influence(bounds_inf, rg, seed);
      const EquilibriumWeights ew = compute_weights(build_game_matrix(rg.graph, v));
      const BMatrixSummary bs = b_matrix_summary(ew);
      const BoundsReport report = compute_bounds(rg.graph, v, ew, bs);

      for (const auto& [name, alloc] : report.allocations())
        if (!is_feasible(ew, alloc, 1e-9))
          throw InvariantViolation("constructive allocation '" + name + "' is infeasible");

      Table table({"name", "value", "constructive", "allocation_ref"});
      for (const auto& row : report.rows())
        table.add({row.name, fmt(row.value), row.constructive ? "true" : "false", row.allocation_ref});

      Json doc = Json::object();
      doc["metadata"] = metadata("bounds", seed, tol, bounds_out);
      doc["graph"] = {{"source", rg.label}, {"n", rg.graph.num_nodes()}, {"edges", rg.graph.num_edges()},
                      {"influence", describe_influence(bounds_inf, rg)}};
      doc["bounds"] = table.to_json();
      doc["closed_form_valid"] = bs.valid;
      Json allocs = Json::object();
      for (const auto& [name, alloc] : report.allocations()) allocs[name] = vector_json(alloc);
      doc["allocations"] = allocs;

      if (bounds_with_opt) {
        BarrierOptions opts;
        opts.tol = tol;
        const InstanceResult r = analyze(rg.graph, v, opts);
        table.add({"optimum", fmt(r.allocation.objective), "true", "optimum"});
        doc["optimum"] = number(r.allocation.objective);
        doc["err_u"] = number(r.err_u);
        doc["err_l"] = number(r.err_l);
        doc["bounds"] = table.to_json();
      }
      emit(bounds_out, out, table, doc);
      return kExitOk;
    };
  });

  // degree-profile -------------------------------------------------------
  DegreeProfileConfig dp;
  dp.graph.family = "ba";
  std::string dp_sizes = "100,200,400,600,800,1000";
  OutputOptions dp_out;
  auto* dp_cmd = app.add_subcommand("degree-profile", "Mean and variance of optimal m_i per degree");
  dp_cmd->add_option("--family", dp.graph.family, "Graph family")
      ->check(CLI::IsMember({"ba", "er", "rr", "star", "clique"}))
      ->capture_default_str();
  dp_cmd->add_option("--sizes", dp_sizes, "Comma-separated sizes or ranges a..b:step")->capture_default_str();
  dp_cmd->add_option("--alpha", dp.alpha, "Uniform influence factor")->capture_default_str();
  dp_cmd->add_option("--attach", dp.graph.attach, "Attachment count (ba)")->capture_default_str();
  dp_cmd->add_option("--p", dp.graph.p, "Edge probability (er)")->capture_default_str();
  dp_cmd->add_option("--d", dp.graph.d, "Degree (rr)");
  add_output_options(dp_cmd, dp_out);
  dp_cmd->callback([&] {
    action = [&] {
      dp.sizes = parse_size_list(dp_sizes);
      dp.graph.seed = seed;
      dp.threads = threads;
      dp.solver.tol = tol;
      const DegreeProfile profile = degree_profile(dp);

      Table table({"n", "degree", "count", "mean", "variance"});
      for (const auto& b : profile.buckets)
        table.add({std::to_string(b.n), std::to_string(b.degree), std::to_string(b.count), fmt(b.mean),
                   fmt(b.variance)});
      Json doc = Json::object();
      doc["metadata"] = metadata("degree-profile", seed, tol, dp_out);
      doc["family"] = dp.graph.family;
      doc["alpha"] = dp.alpha;
      doc["buckets"] = table.to_json();
      Json rho = Json::array();
      for (const auto& [n, r] : profile.spearman_by_size) rho.push_back({{"n", n}, {"spearman", number(r)}});
      doc["spearman"] = rho;
      emit(dp_out, out, table, doc);
      return kExitOk;
    };
  });

  // tightness ------------------------------------------------------------
  TightnessConfig tc;
  std::string tc_sizes = "100..600:100";
  OutputOptions tc_out;
  auto* tc_cmd = app.add_subcommand("tightness", "Relative slack of the general bounds under random influence");
  tc_cmd->add_option("--family", tc.family, "Graph family")
      ->check(CLI::IsMember({"rr", "ba", "er"}))
      ->capture_default_str();
  tc_cmd->add_option("--sizes", tc_sizes, "Comma-separated sizes or ranges a..b:step")->capture_default_str();
  tc_cmd->add_option("--weights-range", tc.weight_range, "Influence factors drawn from U[0, c]")
      ->capture_default_str();
  tc_cmd->add_option("--repeats", tc.repeats, "Repetitions per size")->capture_default_str();
  tc_cmd->add_option("--p", tc.p, "Edge probability (er)")->capture_default_str();
  tc_cmd->add_option("--attach", tc.attach, "Attachment count (ba); 0 alternates 2 and 3");
  tc_cmd->add_option("--d", tc.degree, "Degree (rr); 0 picks n^(0.25 + 0.1 k)");
  add_output_options(tc_cmd, tc_out);
  tc_cmd->callback([&] {
    action = [&] {
      tc.sizes = parse_size_list(tc_sizes);
      tc.seed = seed;
      tc.threads = threads;
      tc.solver.tol = tol;
      const TightnessSummary summary = tightness(tc);

      Table table({"family", "n", "rep", "params", "optimum", "general_lower", "general_upper", "err_u",
                   "err_l", "closed_form"});
      for (const auto& r : summary.records)
        table.add({r.family, std::to_string(r.n), std::to_string(r.rep), r.params, fmt(r.optimum),
                   fmt(r.general_lower), fmt(r.general_upper), fmt(r.err_u), fmt(r.err_l),
                   r.closed_form_valid ? "true" : "false"});
      Json doc = Json::object();
      doc["metadata"] = metadata("tightness", seed, tol, tc_out);
      doc["family"] = tc.family;
      doc["weights_range"] = tc.weight_range;
      doc["repeats"] = tc.repeats;
      doc["records"] = table.to_json();
      doc["max_err_u"] = number(summary.max_err_u);
      doc["max_err_l"] = number(summary.max_err_l);
      doc["closed_form_valid"] = summary.closed_form_valid;
      emit(tc_out, out, table, doc);
      return kExitOk;
    };
  });

  // validate -------------------------------------------------------------
  GraphSource val_src;
  InfluenceOptions val_inf;
  OutputOptions val_out;
  double val_eps = 0.01;
  double val_scale = 1.0;
  std::string val_task = "mean";
  EstimationConfig val_cfg;
  auto* val_cmd = app.add_subcommand("validate", "Monte-Carlo check of the equilibrium error guarantee");
  add_graph_options(val_cmd, val_src);
  add_influence_options(val_cmd, val_inf);
  add_output_options(val_cmd, val_out);
  val_cmd->add_option("--eps", val_eps, "Target error")->capture_default_str();
  val_cmd->add_option("--noise-variance", val_cfg.noise_variance, "Label noise variance")->capture_default_str();
  val_cmd->add_option("--trials", val_cfg.trials, "Monte-Carlo trials")->capture_default_str();
  val_cmd->add_option("--task", val_task, "Learning task")
      ->check(CLI::IsMember({"mean", "regression"}))
      ->capture_default_str();
  val_cmd->add_option("--dim", val_cfg.dim, "Parameter dimension")->capture_default_str();
  val_cmd->add_option("--scale", val_scale, "Multiply the optimal allocation before rounding")
      ->capture_default_str();
  val_cmd->callback([&] {
    action = [&] {
      const ResolvedGraph rg = resolve_graph(val_src, seed, err);
      const InfluenceFactors v = resolve_influence(val_inf, rg, seed);
      const EquilibriumWeights ew = compute_weights(build_game_matrix(rg.graph, v));
      BarrierOptions opts;
      opts.tol = tol;
      const Allocation alloc = solve(ew, opts);
      if (!alloc.ok()) throw NumericalError("solver failed: " + alloc.diagnostics);

      val_cfg.task = val_task == "mean" ? EstimationTask::MeanEstimation : EstimationTask::LinearRegression;
      val_cfg.seed = seed;
      val_cfg.threads = threads;
      const GuaranteeReport report = check_guarantee(rg.graph, v, alloc.m * val_scale, val_eps, val_cfg);

      Table table({"agent", "m", "theoretical", "empirical", "ci_low", "ci_high", "pass"});
      for (const auto& a : report.agents)
        table.add({std::to_string(a.agent), std::to_string(a.m), fmt(a.theoretical), fmt(a.empirical),
                   fmt(a.ci_low), fmt(a.ci_high), a.pass ? "true" : "false"});
      Json doc = Json::object();
      doc["metadata"] = metadata("validate", seed, tol, val_out);
      doc["graph"] = {{"source", rg.label}, {"n", rg.graph.num_nodes()},
                      {"influence", describe_influence(val_inf, rg)}};
      doc["eps"] = val_eps;
      doc["m_eps"] = number(report.m_eps);
      doc["task"] = val_task;
      doc["trials"] = val_cfg.trials;
      doc["agents"] = table.to_json();
      doc["failures"] = report.failures();
      emit(val_out, out, table, doc);
      if (!report.all_passed()) {
        err << "validation: " << report.failures() << " agent(s) exceed eps\n";
        return kExitInvariant;
      }
      return kExitOk;
    };
  });

  // alpha-sweep ----------------------------------------------------------
  GraphSource sweep_src;
  OutputOptions sweep_out;
  std::string sweep_alphas = "0.01,0.1,1,5,10";
  auto* sweep_cmd = app.add_subcommand("alpha-sweep", "Optimum and bounds across uniform influence values");
  add_graph_options(sweep_cmd, sweep_src);
  add_output_options(sweep_cmd, sweep_out);
  sweep_cmd->add_option("--alphas", sweep_alphas, "Comma-separated alpha values")->capture_default_str();
  sweep_cmd->callback([&] {
    action = [&] {
      const ResolvedGraph rg = resolve_graph(sweep_src, seed, err);
      BarrierOptions opts;
      opts.tol = tol;
      const auto records = alpha_sweep(rg.graph, parse_double_list(sweep_alphas), opts);

      std::vector<std::string> header{"alpha", "optimum", "status"};
      for (auto& h : bounds_header()) header.push_back(h);
      for (const char* h : {"err_u", "err_l", "estimator"}) header.push_back(h);
      Table table(header);
      for (const auto& rec : records) {
        std::vector<std::string> row{fmt(rec.alpha), fmt(rec.result.allocation.objective),
                                     std::string(to_string(rec.result.allocation.status))};
        for (auto& c : bounds_cells(rec.result.bounds)) row.push_back(c);
        row.push_back(fmt(rec.result.err_u));
        row.push_back(fmt(rec.result.err_l));
        const auto est = estimator_for(sweep_src, rg.graph, rec.alpha);
        row.push_back(est ? fmt(*est) : "");
        table.add(std::move(row));
      }
      Json doc = Json::object();
      doc["metadata"] = metadata("alpha-sweep", seed, tol, sweep_out);
      doc["graph"] = {{"source", rg.label}, {"n", rg.graph.num_nodes()}, {"edges", rg.graph.num_edges()}};
      doc["records"] = table.to_json();
      emit(sweep_out, out, table, doc);
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
    return action ? action() : kExitUsage;
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::Error& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"netsample"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace netsample::cli
