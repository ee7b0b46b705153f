#include "netsample/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "netsample/equilibrium.hpp"
#include "netsample/errors.hpp"

namespace netsample {

std::string GraphSpec::describe() const {
  std::ostringstream s;
  s << family;
  if (family == "hypercube") {
    s << " d=" << d;
  } else {
    s << " n=" << n;
    if (family == "rr") s << " d=" << d;
    if (family == "er") s << " p=" << p;
    if (family == "ba") s << " attach=" << attach;
    if (family == "rr" || family == "er" || family == "ba") s << " seed=" << seed;
  }
  return s.str();
}

Graph make_graph(const GraphSpec& spec) {
  const std::string& f = spec.family;
  if (f == "clique") return clique(spec.n);
  if (f == "star") return star(spec.n);
  if (f == "hypercube") return hypercube(spec.d);
  if (f == "rr" || f == "random_regular") return random_regular(spec.n, spec.d, spec.seed);
  if (f == "er" || f == "erdos_renyi") return erdos_renyi(spec.n, spec.p, spec.seed);
  if (f == "ba" || f == "barabasi_albert") return barabasi_albert(spec.n, spec.attach, spec.seed);
  throw std::invalid_argument("unknown graph family '" + f + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

InstanceResult analyze(const Graph& g, const InfluenceFactors& v, const BarrierOptions& options) {
  const EquilibriumWeights ew = compute_weights(build_game_matrix(g, v));
  const BMatrixSummary bs = b_matrix_summary(ew);

  InstanceResult r;
  r.closed_form_valid = bs.valid;
  if (auto closed = closed_form_solve(bs)) {
    r.allocation = std::move(*closed);
  } else {
    r.allocation = solve_primal(ew, options);
    if (!r.allocation.ok())
      throw NumericalError("barrier solver did not converge: " + r.allocation.diagnostics);
  }
  r.bounds = compute_bounds(g, v, ew, bs);

  for (const auto& [name, alloc] : r.bounds.allocations())
    if (!is_feasible(ew, alloc, 1e-9))
      throw InvariantViolation("constructive allocation '" + name + "' is infeasible");

  const double opt = r.allocation.objective;
  const double lower = r.bounds.best_lower();
  const double upper = r.bounds.best_upper();
  std::ostringstream msg;
  msg.precision(12);
  if (lower > opt * (1.0 + kSandwichTol)) {
    msg << "lower bound " << lower << " exceeds optimum " << opt;
    throw InvariantViolation(msg.str());
  }
  if (opt > upper * (1.0 + kSandwichTol)) {
    msg << "optimum " << opt << " exceeds upper bound " << upper;
    throw InvariantViolation(msg.str());
  }

  auto clamp_small = [](double x) { return (x < 0 && x >= -kSandwichTol) ? 0.0 : x; };
  r.err_u = clamp_small((r.bounds.general.upper - opt) / opt);
  r.err_l = clamp_small((opt - r.bounds.general.lower) / opt);
  return r;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = avg;
    i = j + 1;
  }
  return out;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs two equal-length samples of size >= 2");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

DegreeProfile degree_profile(const DegreeProfileConfig& cfg) {
  if (cfg.sizes.empty()) throw std::invalid_argument("degree profile needs at least one size");
  const auto v = InfluenceFactors::uniform(cfg.alpha);

  std::vector<std::vector<DegreeBucket>> per_size(cfg.sizes.size());
  parallel_for(cfg.sizes.size(), cfg.threads, [&](std::size_t k) {
    GraphSpec spec = cfg.graph;
    spec.n = cfg.sizes[k];
    spec.seed = derive_seed(cfg.graph.seed, spec.n, k);
    const Graph g = make_graph(spec);
    const Allocation alloc = solve(compute_weights(build_game_matrix(g, v)), cfg.solver);
    if (!alloc.ok()) throw NumericalError("solver failed on " + spec.describe() + ": " + alloc.diagnostics);

    std::map<std::size_t, std::vector<double>> by_degree;
    for (NodeId i = 0; i < g.num_nodes(); ++i) by_degree[g.degree(i)].push_back(alloc.m[i]);
    for (const auto& [degree, values] : by_degree) {
      DegreeBucket b;
      b.n = g.num_nodes();
      b.degree = degree;
      b.count = values.size();
      b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(b.count);
      for (double x : values) b.variance += (x - b.mean) * (x - b.mean);
      b.variance /= static_cast<double>(b.count);
      per_size[k].push_back(b);
    }
  });

  DegreeProfile out;
  for (std::size_t k = 0; k < per_size.size(); ++k) {
    std::vector<double> deg, mean;
    for (const auto& b : per_size[k]) {
      deg.push_back(static_cast<double>(b.degree));
      mean.push_back(b.mean);
      out.buckets.push_back(b);
    }
    out.spearman_by_size.emplace_back(cfg.sizes[k], deg.size() >= 2 ? spearman(deg, mean) : 0.0);
  }
  return out;
}

namespace {

std::size_t auto_degree(std::size_t n, std::size_t rep) {
  const double exponent = 0.25 + 0.1 * static_cast<double>(rep % 5);
  auto d = static_cast<std::size_t>(std::lround(std::pow(static_cast<double>(n), exponent)));
  d = std::clamp<std::size_t>(d, 3, n - 1);
  if ((n * d) % 2 != 0) d = d + 1 < n ? d + 1 : d - 1;
  return d;
}

}  // namespace

TightnessSummary tightness(const TightnessConfig& cfg) {
  if (cfg.sizes.empty()) throw std::invalid_argument("tightness needs at least one size");
  if (cfg.repeats == 0) throw std::invalid_argument("tightness needs at least one repetition");

  const std::size_t jobs = cfg.sizes.size() * cfg.repeats;
  std::vector<TightnessRecord> records(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t k = job / cfg.repeats;
    const std::size_t rep = job % cfg.repeats;
    GraphSpec spec;
    spec.family = cfg.family;
    spec.n = cfg.sizes[k];
    spec.seed = derive_seed(cfg.seed, spec.n, 2 * rep);
    spec.p = cfg.p;
    spec.attach = cfg.attach != 0 ? cfg.attach : (rep % 5 < 3 ? 2 : 3);
    spec.d = cfg.degree != 0 ? cfg.degree : auto_degree(spec.n, rep);
    if (cfg.family != "rr" && cfg.family != "ba" && cfg.family != "er")
      throw std::invalid_argument("tightness supports rr, ba and er families");

    const Graph g = make_graph(spec);
    const auto v = InfluenceFactors::random_uniform(g, cfg.weight_range, derive_seed(cfg.seed, spec.n, 2 * rep + 1));
    const InstanceResult r = analyze(g, v, cfg.solver);

    TightnessRecord& rec = records[job];
    rec.family = cfg.family;
    rec.n = spec.n;
    rec.rep = rep;
    rec.params = spec.describe();
    rec.optimum = r.allocation.objective;
    rec.general_lower = r.bounds.general.lower;
    rec.general_upper = r.bounds.general.upper;
    rec.err_u = r.err_u;
    rec.err_l = r.err_l;
    rec.closed_form_valid = r.closed_form_valid;
  });

  TightnessSummary out;
  out.records = std::move(records);
  for (const auto& rec : out.records) {
    out.max_err_u = std::max(out.max_err_u, rec.err_u);
    out.max_err_l = std::max(out.max_err_l, rec.err_l);
    out.closed_form_valid += rec.closed_form_valid;
  }
  return out;
}

std::vector<AlphaSweepRecord> alpha_sweep(const Graph& g, const std::vector<double>& alphas,
                                          const BarrierOptions& options) {
  std::vector<AlphaSweepRecord> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) out.push_back({alpha, analyze(g, InfluenceFactors::uniform(alpha), options)});
  return out;
}

}  // namespace netsample
