// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robsub/harness.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include "robsub/arisen.hpp"
#include "robsub/dosim.hpp"
#include "robsub/rascal.hpp"

namespace robsub {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Small utilities.

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { add(header); }

  void add(const std::vector<std::string>& row) {
    if (row.size() != width_) throw Error("csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text_ += ',';
      text_ += csv_field(row[i]);
    }
    text_ += "\r\n";
  }
  const std::string& text() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

std::string num(double v) { return format_number(v); }
std::string num(long long v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

std::string join_set(const ItemSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(s[i]);
  }
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Run-wide context shared by the experiment bodies.
struct Context {
  const RunConfig& cfg;
  RunManifest& manifest;
  Json summary = Json::object();

  std::string time(double ms) const { return cfg.timing ? format_number(ms) : "NA"; }

  void emit(const std::string& file, const Csv& csv) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = cfg.out_dir / file;
    write_file(path, csv.text());
    manifest.outputs.push_back({file, sha256_hex(csv.text()), csv.text().size()});
  }

  template <typename Fn>
  auto phase(const std::string& name, Fn&& fn) {
    Stopwatch sw;
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      manifest.phases.push_back({name, sw.ms()});
    } else {
      auto result = fn();
      manifest.phases.push_back({name, sw.ms()});
      return result;
    }
  }
};

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("config: missing '") + key + "'");
  return j.at(key);
}

VectorXd to_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("config: '") + what + "' must be an array");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string("config: '") + what + "' must hold numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

fs::path resolve(const RunConfig& cfg, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : cfg.base_dir / path;
}

// ---------------------------------------------------------------------------
// Graph inputs.

struct GraphInput {
  std::shared_ptr<const Graph> graph;
  std::optional<EdgeParams> params;  // from the edge list, when present
  std::optional<SbmParams> sbm;
};

SbmParams sbm_from_json(const Json& j) {
  SbmParams p;
  p.sizes = require(j, "sizes").get<std::vector<int>>();
  p.p_within = require(j, "p_within").get<double>();
  p.p_between = require(j, "p_between").get<double>();
  p.validate();
  return p;
}

GraphInput load_graph(const RunConfig& cfg, const Json& spec) {
  GraphInput out;
  if (spec.contains("path")) {
    auto list = read_edge_list(resolve(cfg, spec.at("path").get<std::string>()).string(),
                               get_or<int>(spec, "nodes", 0));
    Graph g = std::move(list.graph);
    if (spec.contains("labels"))
      g = attach_labels(g, read_labels(resolve(cfg, spec.at("labels").get<std::string>()).string(), g.num_nodes()));
    out.params = std::move(list.params);
    out.graph = std::make_shared<const Graph>(std::move(g));
  } else if (spec.contains("edges")) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : spec.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    out.graph = std::make_shared<const Graph>(Graph::from_edges(require(spec, "nodes").get<int>(), std::move(edges)));
  } else if (spec.contains("sbm")) {
    out.sbm = sbm_from_json(spec.at("sbm"));
    const auto graph_seed = get_or<std::uint64_t>(spec, "seed", derive_seed(cfg.seed, 0x6A));
    out.graph = std::make_shared<const Graph>(generate_sbm(*out.sbm, graph_seed));
  } else {
    throw InputError("config: graph needs one of 'path', 'edges' or 'sbm'");
  }
  if (spec.contains("sbm_params")) out.sbm = sbm_from_json(spec.at("sbm_params"));
  return out;
}

EdgeParams edge_params(const Json& params, const GraphInput& in) {
  if (params.contains("p")) return EdgeParams::uniform(*in.graph, params.at("p").get<double>());
  if (in.params) return *in.params;
  throw InputError("config: give a global 'p' or per-edge probabilities in the edge list");
}

// ---------------------------------------------------------------------------
// icm-sim

void run_icm(Context& ctx) {
  const auto& p = ctx.cfg.params;
  const GraphInput in = load_graph(ctx.cfg, require(p, "graph"));
  const EdgeParams params = edge_params(p, in);
  params.validate(*in.graph);
  const int horizon = get_or<int>(p, "horizon", 1);
  const auto samples = get_or<std::size_t>(p, "samples", 10000);
  const bool exact = get_or<bool>(p, "exact", false);
  const int cap = ctx.cfg.cap_override ? 64 : kExactSpreadCap;
  const auto sets = require(p, "seed_sets").get<std::vector<ItemSet>>();

  Csv csv({"instance_id", "seed", "seed_set", "horizon", "samples", "estimate", "std_error", "exact",
           "wall_time_ms"});
  ctx.phase("simulate", [&] {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      Stopwatch sw;
      const auto cc = CascadeConfig::single(normalized(sets[i]), horizon);
      const std::uint64_t s = derive_seed(ctx.cfg.seed, i);
      const auto est = expected_spread(*in.graph, params, cc, samples, s);
      const double ex = exact ? exact_spread(*in.graph, params, cc, cap) : std::nan("");
      csv.add({ctx.cfg.instance_id, num(ctx.cfg.seed), join_set(normalized(sets[i])), num(horizon),
               num(samples), num(est.estimate), num(est.std_error), num(ex), ctx.time(sw.ms())});
    }
  });
  ctx.emit("icm.csv", csv);
}

// ---------------------------------------------------------------------------
// equator-bench

EquatorConfig equator_config(const Json& j) {
  EquatorConfig c;
  c.epsilon = get_or(j, "epsilon", c.epsilon);
  c.delta = get_or(j, "delta", c.delta);
  c.iterations = get_or(j, "iterations", c.iterations);
  c.grad_samples = get_or(j, "grad_samples", c.grad_samples);
  c.eval_samples = get_or(j, "eval_samples", c.eval_samples);
  c.strategy_samples = get_or(j, "strategy_samples", c.strategy_samples);
  c.closed_form = get_or(j, "closed_form", c.closed_form);
  c.validate();
  return c;
}

DoubleOracleConfig oracle_config(const Json& j) {
  DoubleOracleConfig c;
  c.tol = get_or(j, "tol", c.tol);
  c.max_iters = get_or(j, "max_iters", c.max_iters);
  c.time_limit_seconds = get_or(j, "time_limit_seconds", c.time_limit_seconds);
  return c;
}

RandomInstanceSpec random_spec(const Json& j) {
  RandomInstanceSpec s;
  s.channels = get_or(j, "channels", s.channels);
  s.customers = get_or(j, "customers", s.customers);
  s.density = get_or(j, "density", s.density);
  s.p_lo = get_or(j, "p_lo", s.p_lo);
  s.p_hi = get_or(j, "p_hi", s.p_hi);
  s.w_lo_min = get_or(j, "w_lo_min", s.w_lo_min);
  s.w_lo_max = get_or(j, "w_lo_max", s.w_lo_max);
  s.width_max = get_or(j, "width_max", s.width_max);
  s.members = get_or(j, "members", s.members);
  s.budget = get_or(j, "budget", s.budget);
  return s;
}

struct NamedProblem {
  std::string id;
  BudgetProblem problem;
  std::uint64_t seed;
};

std::vector<NamedProblem> budget_instances(const RunConfig& cfg) {
  std::vector<NamedProblem> out;
  const Json& list = require(cfg.params, "instances");
  if (!list.is_array() || list.empty()) throw InputError("config: 'instances' must be a nonempty array");
  std::uint64_t index = 0;
  for (std::size_t e = 0; e < list.size(); ++e) {
    const Json& spec = list[e];
    const auto kind = get_or<std::string>(spec, "kind", "random");
    const auto base_id = get_or<std::string>(spec, "id", kind + std::to_string(e));
    const int count = get_or(spec, "count", 1);
    for (int r = 0; r < count; ++r, ++index) {
      const std::uint64_t s = derive_seed(cfg.seed, index);
      const std::string id = count == 1 ? base_id : base_id + "-" + std::to_string(r);
      if (kind == "random") {
        out.push_back({id, make_random_instance(random_spec(spec), s), s});
      } else if (kind == "adversarial") {
        out.push_back({id,
                       make_adversarial_instance(get_or(spec, "groups", 3), get_or(spec, "channels_per_group", 4),
                                                 get_or(spec, "customers_per_group", 5), get_or(spec, "budget", 2),
                                                 get_or(spec, "p", 0.5), s),
                       s});
      } else if (kind == "file") {
        out.push_back({id, budget_problem_from_json(read_file(resolve(cfg, require(spec, "path").get<std::string>()))), s});
      } else {
        throw InputError("config: unknown instance kind '" + kind + "'");
      }
    }
  }
  return out;
}

void run_equator_bench(Context& ctx) {
  const auto& p = ctx.cfg.params;
  CompareSettings settings;
  settings.equator = equator_config(get_or(p, "equator", Json::object()));
  settings.double_oracle = oracle_config(get_or(p, "double_oracle", Json::object()));
  settings.algorithms = get_or(p, "algorithms", settings.algorithms);
  const auto problems = ctx.phase("instances", [&] { return budget_instances(ctx.cfg); });

  Csv csv({"instance_id", "algorithm", "n", "k", "m", "worst_case_value", "greedy_value", "wall_time_ms",
           "seed", "status"});
  ctx.phase("compare", [&] {
    for (const auto& np : problems) {
      for (const auto& row : compare_algorithms(np.problem, np.id, settings, np.seed)) {
        csv.add({row.instance_id, row.algorithm, num(row.n), num(row.k), num(row.m), num(row.worst_case_value),
                 num(row.greedy_value), ctx.time(row.wall_time_ms), num(row.seed), row.status});
      }
    }
  });
  ctx.emit("equator.csv", csv);
}

// ---------------------------------------------------------------------------
// dosim-run

void run_dosim(Context& ctx) {
  const auto& p = ctx.cfg.params;
  const GraphInput in = load_graph(ctx.cfg, require(p, "graph"));
  InfluenceGame game;
  game.graph = in.graph;
  const Json& iv = require(p, "interval");
  if (iv.at("lo").is_array()) {
    game.intervals = {to_vector(iv.at("lo"), "lo"), to_vector(require(iv, "hi"), "hi")};
  } else {
    game.intervals = IntervalUncertainty::global(*in.graph, iv.at("lo").get<double>(), require(iv, "hi").get<double>());
  }
  game.budget = get_or(p, "K", 1);
  game.horizon = get_or(p, "T", 1);
  game.samples = get_or(p, "samples", game.samples);
  const auto payoff = get_or<std::string>(p, "payoff", "ratio");
  if (payoff != "ratio" && payoff != "raw") throw InputError("config: payoff must be 'ratio' or 'raw'");
  game.payoff = payoff == "ratio" ? PayoffMode::ratio : PayoffMode::raw;
  const auto opt = get_or<std::string>(p, "opt", "exact");
  if (opt != "exact" && opt != "greedy") throw InputError("config: opt must be 'exact' or 'greedy'");
  game.opt = opt == "exact" ? OptMode::exact : OptMode::greedy;

  DosimConfig dc;
  dc.delta_grid = get_or(p, "delta_grid", dc.delta_grid);
  dc.coupled = get_or(p, "coupled", dc.coupled);
  if (ctx.cfg.cap_override) dc.grid_cap = std::numeric_limits<std::size_t>::max();
  dc.oracle = oracle_config(get_or(p, "double_oracle", Json::object()));

  const DosimResult res = ctx.phase("solve", [&] { return dosim_solve(game, dc, ctx.cfg.seed); });
  const auto& eq = res.equilibrium;
  Csv csv({"instance_id", "seed", "iteration", "game_value", "security_value", "maximizer_support",
           "adversary_support", "grid_size", "wall_time_ms"});
  for (std::size_t t = 0; t < eq.game_values.size(); ++t)
    csv.add({ctx.cfg.instance_id, num(ctx.cfg.seed), num(t + 1), num(eq.game_values[t]),
             num(eq.security_values[t]), num(eq.maximizer_support[t]), num(eq.adversary_support[t]),
             num(res.grid.points.size()), ctx.time(eq.elapsed_ms[t])});
  ctx.emit("dosim.csv", csv);

  Csv strat({"instance_id", "seed", "seed_set", "weight"});
  for (const auto& ws : eq.security_strategy.support())
    strat.add({ctx.cfg.instance_id, num(ctx.cfg.seed), join_set(ws.set), num(ws.weight)});
  ctx.emit("dosim_strategy.csv", strat);
  ctx.summary = {{"game_value", eq.game_value},
                 {"worst_grid_ratio", res.worst_grid_ratio},
                 {"converged", eq.converged},
                 {"warning", res.warning},
                 {"iterations", eq.iterations}};
}

// ---------------------------------------------------------------------------
// arisen-bench

void run_arisen_bench(Context& ctx) {
  const auto& p = ctx.cfg.params;
  const GraphInput in = ctx.phase("graph", [&] { return load_graph(ctx.cfg, require(p, "graph")); });
  if (!in.sbm) throw InputError("config: arisen-bench needs block-model parameters ('sbm' or 'sbm_params')");
  const EdgeParams params = edge_params(p, in);
  const int k = get_or(p, "K", 10);
  const int horizon = get_or(p, "T", 2);
  const int trials = get_or(p, "trials", 50);
  const auto eval_samples = get_or<std::size_t>(p, "eval_samples", 500);
  const auto greedy_samples = get_or<std::size_t>(p, "greedy_samples", eval_samples);
  const auto protocols = get_or(p, "protocols", std::vector<std::string>{"arisen"});
  ArisenConfig ac;
  ac.prospective = get_or(p, "prospective", ac.prospective);
  ac.walk_len = get_or(p, "walk_len", ac.walk_len);
  ac.budget = get_or<long long>(p, "budget", ac.budget);
  const auto seed_choice = get_or<std::string>(p, "seed_choice", "walk_max_degree");
  if (seed_choice == "prospective")
    ac.seed_choice = ArisenConfig::SeedChoice::prospective;
  else if (seed_choice != "walk_max_degree")
    throw InputError("config: seed_choice must be 'prospective' or 'walk_max_degree'");
  const double fraction = get_or(p, "fraction", 0.18);
  const int n = in.graph->num_nodes();

  const auto full = influence_set_objective(in.graph, params, horizon, eval_samples);
  const SampleSpec eval{eval_samples, derive_seed(ctx.cfg.seed, 0xE7)};
  const Constraint ck = Constraint::cardinality(n, k);
  const double greedy_full = ctx.phase("full_greedy", [&] {
    const ItemSet s = greedy_maximize(*full, ck, {greedy_samples, derive_seed(ctx.cfg.seed, 0x6F)}, GreedyVariant::lazy);
    return full->value(s, eval);
  });

  Csv csv({"instance_id", "protocol", "trial", "seed", "queries_used", "fraction_queried", "spread",
           "greedy_full_spread", "ratio", "communities_covered", "wall_time_ms"});
  for (const auto& protocol : protocols) {
    if (protocol != "arisen" && protocol != "change") throw InputError("config: unknown protocol '" + protocol + "'");
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(trials));
    ctx.phase(protocol, [&] {
      parallel_for(rows.size(), [&](std::size_t t) {
        Stopwatch sw;
        const std::uint64_t ts = derive_seed(ctx.cfg.seed, protocol == "arisen" ? 1 : 2, t);
        ItemSet seeds;
        long long queries = 0;
        if (protocol == "arisen") {
          const auto res = arisen_select(*in.graph, k, *in.sbm, ac, ts);
          seeds = res.seeds;
          queries = res.queries_used;
        } else {
          auto sample = change_sample(*in.graph, fraction, ts);
          EdgeParams sub{VectorXd(static_cast<Eigen::Index>(sample.hidden_edge.size()))};
          for (std::size_t e = 0; e < sample.hidden_edge.size(); ++e)
            sub.prob[static_cast<Eigen::Index>(e)] = params[sample.hidden_edge[e]];
          queries = sample.queried;
          auto observed = std::make_shared<const Graph>(std::move(sample.observed));
          const auto f = influence_set_objective(observed, sub, horizon, greedy_samples);
          seeds = greedy_maximize(*f, ck, {greedy_samples, derive_seed(ts, 3)}, GreedyVariant::lazy);
        }
        const double spread = full->value(seeds, eval);
        std::vector<int> communities;
        if (in.graph->has_labels())
          for (int v : seeds) communities.push_back(in.graph->labels()[static_cast<std::size_t>(v)]);
        const auto covered = normalized(std::move(communities)).size();
        rows[t] = {ctx.cfg.instance_id, protocol, num(t), num(ts), num(queries),
                   num(static_cast<double>(queries) / n), num(spread), num(greedy_full),
                   num(spread / greedy_full), in.graph->has_labels() ? num(covered) : "NA", ctx.time(sw.ms())};
      });
    });
    for (const auto& r : rows) csv.add(r);
  }
  ctx.emit("arisen.csv", csv);
}

// ---------------------------------------------------------------------------
// rascal-bench

struct RascalInstance {
  std::shared_ptr<ScenarioMixtureObjective> objective;
  std::shared_ptr<Polytope> polytope;
  std::optional<PortfolioProblem> portfolio;
};

VectorXd probs_or_uniform(const Json& j, std::size_t count) {
  if (j.contains("probs")) return to_vector(j.at("probs"), "probs");
  return VectorXd::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
}

RascalInstance rascal_instance(const RunConfig& cfg) {
  const Json& o = require(cfg.params, "objective");
  const auto kind = require(o, "kind").get<std::string>();
  RascalInstance out;
  if (kind == "portfolio") {
    const Json& pj = require(o, "problem");
    const BudgetProblem bp = pj.is_string() ? budget_problem_from_json(read_file(resolve(cfg, pj.get<std::string>())))
                                            : budget_problem_from_json(pj.dump());
    std::vector<ObjectivePtr> members;
    for (const auto& w : bp.uncertainty.weights) members.push_back(budget_objective(bp.instance, w));
    const int k = get_or(o, "k", bp.instance.budget);
    out.portfolio = portfolio_reduction(members, probs_or_uniform(o, members.size()),
                                        Constraint::cardinality(bp.instance.channels, k),
                                        get_or<std::size_t>(o, "samples", 2000), derive_seed(cfg.seed, 0x9F));
    out.objective = out.portfolio->objective;
    out.polytope = out.portfolio->polytope;
    return out;
  }
  const VectorXd upper = to_vector(require(o, "box_upper"), "box_upper");
  if (kind == "separable_exponential") {
    std::vector<std::pair<VectorXd, VectorXd>> scenarios;
    for (const auto& s : require(o, "scenarios"))
      scenarios.emplace_back(to_vector(require(s, "a"), "a"), to_vector(require(s, "b"), "b"));
    out.objective = separable_exponential(scenarios, probs_or_uniform(o, scenarios.size()), upper);
  } else if (kind == "modular") {
    std::vector<VectorXd> weights;
    for (const auto& w : require(o, "weights")) weights.push_back(to_vector(w, "weights"));
    out.objective = scenario_modular(weights, probs_or_uniform(o, weights.size()), upper);
  } else {
    throw InputError("config: unknown objective kind '" + kind + "'");
  }
  const Json poly = get_or(cfg.params, "polytope", Json{{"kind", "box"}});
  const auto pk = get_or<std::string>(poly, "kind", "box");
  if (pk == "box") {
    out.polytope = std::make_shared<BoxPolytope>(upper);
  } else if (pk == "budget") {
    out.polytope = std::make_shared<BudgetPolytope>(static_cast<int>(upper.size()), require(poly, "budget").get<double>());
  } else {
    throw InputError("config: unknown polytope kind '" + pk + "'");
  }
  return out;
}

void run_rascal_bench(Context& ctx) {
  const auto& p = ctx.cfg.params;
  const RascalInstance inst = ctx.phase("instance", [&] { return rascal_instance(ctx.cfg); });
  CvarConfig cc;
  cc.alpha = get_or(p, "alpha", cc.alpha);
  cc.epsilon = get_or(p, "epsilon", cc.epsilon);
  cc.delta = get_or(p, "delta", cc.delta);
  cc.iterations = get_or(p, "iterations", cc.iterations);
  cc.scenario_samples = get_or(p, "scenario_samples", cc.scenario_samples);
  cc.smoothing_width = get_or(p, "smoothing_width", cc.smoothing_width);
  cc.validate();
  const auto scenarios = get_or<std::string>(p, "scenarios", "sampled");
  if (scenarios != "sampled" && scenarios != "exact") throw InputError("config: scenarios must be 'sampled' or 'exact'");
  const ScenarioSet exact = ScenarioSet::exact(*inst.objective);
  const ScenarioSet* fixed = scenarios == "exact" ? &exact : nullptr;
  const auto algorithms = get_or(p, "algorithms", std::vector<std::string>{"rascal"});

  Csv csv({"instance_id", "algorithm", "seed", "iteration", "tau", "cvar_estimate", "wall_time_ms"});
  Json results = Json::object();
  for (const auto& algo : algorithms) {
    if (algo != "rascal" && algo != "expectation_fw") throw InputError("config: unknown algorithm '" + algo + "'");
    const RascalResult res = ctx.phase(algo, [&] {
      return algo == "rascal" ? rascal_solve(*inst.objective, *inst.polytope, cc, ctx.cfg.seed, fixed)
                              : expectation_frank_wolfe(*inst.objective, *inst.polytope, cc, ctx.cfg.seed, fixed);
    });
    for (const auto& row : res.trace)
      csv.add({ctx.cfg.instance_id, algo, num(ctx.cfg.seed), num(row.iteration + 1), num(row.tau),
               num(row.cvar_estimate), ctx.time(row.elapsed_ms)});
    Json r = {{"x", std::vector<double>(res.x.data(), res.x.data() + res.x.size())},
              {"cvar", cvar_alpha(*inst.objective, res.x, exact, cc.alpha)}};
    if (inst.portfolio) {
      const auto portfolio = portfolio_from_solution(res, inst.portfolio->polytope->constraint(),
                                                     get_or<std::size_t>(p, "portfolio_size", 50),
                                                     derive_seed(ctx.cfg.seed, 0x5A));
      r["portfolio_cvar"] = portfolio_cvar(portfolio, *inst.portfolio, cc.alpha);
    }
    results[algo] = r;
  }
  ctx.emit("rascal.csv", csv);
  ctx.summary = results;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<CompareRow> compare_algorithms(const BudgetProblem& problem,
                                           const std::string& instance_id,
                                           const CompareSettings& settings, std::uint64_t seed) {
  problem.instance.validate();
  const ObjectiveFamily family = budget_family(problem.instance, problem.uncertainty);
  const Constraint c = budget_constraint(problem.instance);
  const ItemSet nominal = nominal_greedy(family, c);
  const double greedy_value = member_values(MixedStrategy::pure(nominal), family).mean();

  std::vector<CompareRow> rows;
  for (const auto& algo : settings.algorithms) {
    CompareRow row;
    row.instance_id = instance_id;
    row.algorithm = algo;
    row.n = problem.instance.channels;
    row.k = problem.instance.budget;
    row.m = family.size();
    row.greedy_value = greedy_value;
    row.seed = seed;
    Stopwatch sw;
    try {
      if (algo == "equator") {
        const BudgetBri bri(problem.instance, problem.uncertainty);
        const auto res = equator_solve(bri, c, settings.equator, derive_seed(seed, 1));
        row.worst_case_value = worst_case_value(res.strategy, family);
      } else if (algo == "double_oracle") {
        const auto res = double_oracle_solve(family, c, settings.double_oracle);
        row.worst_case_value = worst_case_value(res.security_strategy, family);
        if (res.timed_out) row.status = "timeout";
        else if (!res.converged) row.status = "max_iters";
      } else if (algo == "greedy") {
        row.worst_case_value = worst_case_value(MixedStrategy::pure(nominal), family);
      } else {
        throw ParameterError("unknown algorithm '" + algo + "'");
      }
    } catch (const std::exception& e) {
      row.worst_case_value = std::nan("");
      row.status = std::string("error: ") + e.what();
    }
    row.wall_time_ms = sw.ms();
    rows.push_back(std::move(row));
  }
  return rows;
}

void RunConfig::validate() const {
  static const std::vector<std::string> kinds{"icm-sim", "equator-bench", "dosim-run", "arisen-bench", "rascal-bench"};
  if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end())
    throw InputError("config: unknown experiment '" + experiment + "'");
  if (!params.is_object()) throw InputError("config: top level must be an object");
  if (instance_id.empty()) throw InputError("config: empty instance_id");
}

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir, const RunOverrides& overrides) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config: top level must be an object");
  RunConfig cfg;
  cfg.params = doc;
  cfg.experiment = get_or<std::string>(doc, "experiment", "");
  cfg.instance_id = get_or<std::string>(doc, "instance_id", cfg.instance_id);
  cfg.base_dir = base_dir;
  if (overrides.seed) {
    cfg.seed = *overrides.seed;
  } else if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer()) throw InputError("config: seed must be an integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  } else {
    throw InputError("config: a seed is required (config 'seed' or --seed)");
  }
  cfg.params["seed"] = cfg.seed;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  else if (doc.contains("out")) cfg.out_dir = resolve(cfg, doc.at("out").get<std::string>());
  cfg.timing = !overrides.no_timing;
  cfg.cap_override = overrides.cap_override;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path, const RunOverrides& overrides) {
  return parse_run_config(read_file(path), path.parent_path(), overrides);
}

Json RunManifest::to_json(bool timing) const {
  Json phases_json = Json::array();
  for (const auto& ph : phases)
    phases_json.push_back({{"name", ph.name}, {"wall_time_ms", timing ? Json(ph.wall_time_ms) : Json(nullptr)}});
  Json outputs_json = Json::array();
  for (const auto& o : outputs) outputs_json.push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  return {{"version", version}, {"config", config}, {"phases", phases_json}, {"outputs", outputs_json}};
}

RunManifest run_experiment(const RunConfig& cfg) {
  cfg.validate();
  RunManifest manifest;
  manifest.config = cfg.params;
  manifest.version = kVersion;
  Context ctx{cfg, manifest};
  if (cfg.experiment == "icm-sim") run_icm(ctx);
  else if (cfg.experiment == "equator-bench") run_equator_bench(ctx);
  else if (cfg.experiment == "dosim-run") run_dosim(ctx);
  else if (cfg.experiment == "arisen-bench") run_arisen_bench(ctx);
  else run_rascal_bench(ctx);

  Json doc = manifest.to_json(cfg.timing);
  if (!ctx.summary.empty()) doc["summary"] = ctx.summary;
  fs::create_directories(cfg.out_dir);
  write_file(cfg.out_dir / "manifest.json", doc.dump(2) + "\n");
  return manifest;
}

}  // namespace robsub
