// Copyright 2026 The eeopt Authors
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

#include "eeopt/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "eeopt/errors.hpp"
#include "eeopt/sweep.hpp"
#include "eeopt/units.hpp"

namespace eeopt {
namespace {

using nlohmann::json;
using units::Quantity;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + (path.empty() ? "<root>" : path) +
                    "': " + what);
}

// Cursor over a JSON object that remembers its dotted path for errors.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  std::string child_path(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  Node object(const char* key) const { return Node(j_.at(key), child_path(key)); }

  void only(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(child_path(it.key().c_str()), "unknown key");
    }
  }

  double quantity(const char* key, Quantity q, double fallback) const {
    if (!has(key)) return fallback;
    return read_quantity(j_.at(key), child_path(key), q);
  }

  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(child_path(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t seed(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      fail(child_path(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(child_path(key), "expected true/false");
    return j_.at(key).get<bool>();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) fail(child_path(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> list(const char* key, Quantity q,
                           const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) fail(child_path(key), "expected a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(read_quantity(v[i], child_path(key) + "[" +
                                            std::to_string(i) + "]", q));
    }
    return out;
  }

  static double read_quantity(const json& v, const std::string& path,
                              Quantity q) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return units::parse(v.get<std::string>(), q);
      } catch (const ConfigError& e) {
        fail(path, e.what());
      }
    }
    fail(path, "expected a number or a \"<value> <unit>\" string");
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

ScenarioConfig parse_scenario(const Node& n) {
  n.only({"n_d2d_pairs", "n_blocks", "d2d_distance", "annulus_inner",
          "annulus_outer", "carrier_frequency", "bandwidth_per_block",
          "noise_figure", "noise_density", "amp_inefficiency", "static_power",
          "max_power", "min_rate", "path_loss_exponent", "reference_loss",
          "shadowing_sigma", "min_link_distance"});
  ScenarioConfig c;
  c.n_d2d_pairs = n.integer("n_d2d_pairs", c.n_d2d_pairs);
  c.n_blocks = n.integer("n_blocks", c.n_blocks);
  c.d2d_distance = n.quantity("d2d_distance", Quantity::Distance, c.d2d_distance);
  c.annulus_inner = n.quantity("annulus_inner", Quantity::Distance, c.annulus_inner);
  c.annulus_outer = n.quantity("annulus_outer", Quantity::Distance, c.annulus_outer);
  c.carrier_frequency =
      n.quantity("carrier_frequency", Quantity::Frequency, c.carrier_frequency);
  c.bandwidth_per_block =
      n.quantity("bandwidth_per_block", Quantity::Frequency, c.bandwidth_per_block);
  // Noise figure and shadowing are kept in dB internally; a bare number is
  // read as dB here.
  if (n.has("noise_figure")) {
    const json& v = n.raw().at("noise_figure");
    c.noise_figure_db =
        v.is_number() ? v.get<double>()
                      : units::linear_to_db(Node::read_quantity(
                            v, n.child_path("noise_figure"), Quantity::Ratio));
  }
  if (n.has("shadowing_sigma")) {
    const json& v = n.raw().at("shadowing_sigma");
    c.shadowing_sigma_db =
        v.is_number() ? v.get<double>()
                      : units::linear_to_db(Node::read_quantity(
                            v, n.child_path("shadowing_sigma"), Quantity::Ratio));
  }
  c.noise_density =
      n.quantity("noise_density", Quantity::PowerDensity, c.noise_density);
  c.amp_inefficiency =
      n.quantity("amp_inefficiency", Quantity::Dimensionless, c.amp_inefficiency);
  c.static_power = n.quantity("static_power", Quantity::Power, c.static_power);
  c.max_power = n.quantity("max_power", Quantity::Power, c.max_power);
  c.min_rate = n.quantity("min_rate", Quantity::Rate, c.min_rate);
  c.path_loss_exponent =
      n.quantity("path_loss_exponent", Quantity::Dimensionless, c.path_loss_exponent);
  if (n.has("reference_loss")) {
    const json& v = n.raw().at("reference_loss");
    if (!v.is_null()) {
      if (!v.is_number()) fail(n.child_path("reference_loss"), "expected dB number");
      c.reference_loss_db = v.get<double>();
    }
  }
  c.min_link_distance =
      n.quantity("min_link_distance", Quantity::Distance, c.min_link_distance);
  try {
    c.validate();
  } catch (const DomainError& e) {
    fail(n.path(), e.what());
  }
  return c;
}

Eigen::VectorXd per_user(const Node& n, const char* key, int users, Quantity q,
                         std::optional<double> fallback) {
  if (!n.has(key)) {
    if (!fallback) fail(n.child_path(key), "missing");
    return Eigen::VectorXd::Constant(users, *fallback);
  }
  const json& v = n.raw().at(key);
  if (!v.is_array()) {
    return Eigen::VectorXd::Constant(users,
                                     Node::read_quantity(v, n.child_path(key), q));
  }
  if (static_cast<int>(v.size()) != users) {
    fail(n.child_path(key), "expected " + std::to_string(users) + " entries");
  }
  Eigen::VectorXd out(users);
  for (int i = 0; i < users; ++i) {
    out(i) = Node::read_quantity(
        v[i], n.child_path(key) + "[" + std::to_string(i) + "]", q);
  }
  return out;
}

NetworkInstance parse_instance(const Node& n) {
  n.only({"bandwidth_per_block", "gain", "noise", "amp_inefficiency",
          "static_power", "max_power", "min_rate"});
  if (!n.has("gain")) fail(n.child_path("gain"), "missing");
  const json& g = n.raw().at("gain");
  const std::string gpath = n.child_path("gain");
  if (!g.is_array() || g.empty()) fail(gpath, "expected gain[j][i][k]");
  const int users = static_cast<int>(g.size());
  int blocks = -1;
  std::vector<Eigen::MatrixXd> gains;
  for (int j = 0; j < users; ++j) {
    if (!g[j].is_array() || static_cast<int>(g[j].size()) != users) {
      fail(gpath + "[" + std::to_string(j) + "]", "expected N rows");
    }
    for (int i = 0; i < users; ++i) {
      const json& row = g[j][i];
      const std::string p = gpath + "[" + std::to_string(j) + "][" +
                            std::to_string(i) + "]";
      if (!row.is_array() || row.empty()) fail(p, "expected K gains");
      if (blocks < 0) {
        blocks = static_cast<int>(row.size());
        gains.assign(blocks, Eigen::MatrixXd::Zero(users, users));
      }
      if (static_cast<int>(row.size()) != blocks) fail(p, "inconsistent K");
      for (int k = 0; k < blocks; ++k) {
        gains[k](j, i) = Node::read_quantity(row[k], p + "[" + std::to_string(k) + "]",
                                             Quantity::Ratio);
      }
    }
  }
  NetworkInstance::Parameters params;
  params.gains = std::move(gains);
  params.bandwidth_per_block =
      n.quantity("bandwidth_per_block", Quantity::Frequency, 0.0);
  if (!n.has("noise")) fail(n.child_path("noise"), "missing");
  const json& nz = n.raw().at("noise");
  params.noise.resize(users, blocks);
  if (!nz.is_array()) {
    params.noise.setConstant(
        Node::read_quantity(nz, n.child_path("noise"), Quantity::Power));
  } else {
    if (static_cast<int>(nz.size()) != users) {
      fail(n.child_path("noise"), "expected noise[i][k] with N rows");
    }
    for (int i = 0; i < users; ++i) {
      const std::string p = n.child_path("noise") + "[" + std::to_string(i) + "]";
      if (!nz[i].is_array() || static_cast<int>(nz[i].size()) != blocks) {
        fail(p, "expected K entries");
      }
      for (int k = 0; k < blocks; ++k) {
        params.noise(i, k) = Node::read_quantity(nz[i][k], p, Quantity::Power);
      }
    }
  }
  params.amp_inefficiency =
      per_user(n, "amp_inefficiency", users, Quantity::Dimensionless, 1.0);
  params.static_power =
      per_user(n, "static_power", users, Quantity::Power, std::nullopt);
  params.max_power = per_user(n, "max_power", users, Quantity::Power, std::nullopt);
  params.min_rate = per_user(n, "min_rate", users, Quantity::Rate, 0.0);
  try {
    return NetworkInstance(std::move(params));
  } catch (const std::exception& e) {
    fail(n.path(), e.what());
  }
}

BarrierSettings parse_barrier(const Node& n) {
  n.only({"initial_tau", "tau_factor", "newton_tolerance", "armijo_slope",
          "backtrack_shrink", "max_newton_per_center", "max_centering_steps",
          "kkt_tolerance", "hessian_regularization"});
  BarrierSettings b;
  const auto num = [&](const char* k, double d) {
    return n.quantity(k, Quantity::Dimensionless, d);
  };
  b.initial_tau = num("initial_tau", b.initial_tau);
  b.tau_factor = num("tau_factor", b.tau_factor);
  b.newton_tolerance = num("newton_tolerance", b.newton_tolerance);
  b.armijo_slope = num("armijo_slope", b.armijo_slope);
  b.backtrack_shrink = num("backtrack_shrink", b.backtrack_shrink);
  b.max_newton_per_center = n.integer("max_newton_per_center", b.max_newton_per_center);
  b.max_centering_steps = n.integer("max_centering_steps", b.max_centering_steps);
  b.kkt_tolerance = num("kkt_tolerance", b.kkt_tolerance);
  b.hessian_regularization = num("hessian_regularization", b.hessian_regularization);
  if (!(b.initial_tau > 0 && b.tau_factor > 1 && b.newton_tolerance > 0 &&
        b.armijo_slope > 0 && b.armijo_slope < 0.5 && b.backtrack_shrink > 0 &&
        b.backtrack_shrink < 1 && b.max_newton_per_center > 0 &&
        b.max_centering_steps > 0 && b.kkt_tolerance > 0 &&
        b.hessian_regularization >= 0)) {
    fail(n.path(), "barrier settings out of range");
  }
  return b;
}

json barrier_json(const BarrierSettings& b) {
  return {{"initial_tau", b.initial_tau},
          {"tau_factor", b.tau_factor},
          {"newton_tolerance", b.newton_tolerance},
          {"armijo_slope", b.armijo_slope},
          {"backtrack_shrink", b.backtrack_shrink},
          {"max_newton_per_center", b.max_newton_per_center},
          {"max_centering_steps", b.max_centering_steps},
          {"kkt_tolerance", b.kkt_tolerance},
          {"hessian_regularization", b.hessian_regularization}};
}

json scenario_json(const ScenarioConfig& c) {
  json j = {{"n_d2d_pairs", c.n_d2d_pairs},
            {"n_blocks", c.n_blocks},
            {"d2d_distance", c.d2d_distance},
            {"annulus_inner", c.annulus_inner},
            {"annulus_outer", c.annulus_outer},
            {"carrier_frequency", c.carrier_frequency},
            {"bandwidth_per_block", c.bandwidth_per_block},
            {"noise_figure", c.noise_figure_db},
            {"noise_density", c.noise_density},
            {"amp_inefficiency", c.amp_inefficiency},
            {"static_power", c.static_power},
            {"max_power", c.max_power},
            {"min_rate", c.min_rate},
            {"path_loss_exponent", c.path_loss_exponent},
            {"reference_loss", nullptr},
            {"shadowing_sigma", c.shadowing_sigma_db},
            {"min_link_distance", c.min_link_distance}};
  if (c.reference_loss_db) j["reference_loss"] = *c.reference_loss_db;
  return j;
}

json instance_json(const NetworkInstance& inst) {
  const int n = inst.n_users();
  const int nk = inst.n_blocks();
  json gain = json::array();
  for (int j = 0; j < n; ++j) {
    json rows = json::array();
    for (int i = 0; i < n; ++i) {
      json ks = json::array();
      for (int k = 0; k < nk; ++k) ks.push_back(inst.gain(j, i, k));
      rows.push_back(ks);
    }
    gain.push_back(rows);
  }
  json noise = json::array();
  for (int i = 0; i < n; ++i) {
    json ks = json::array();
    for (int k = 0; k < nk; ++k) ks.push_back(inst.noise(i, k));
    noise.push_back(ks);
  }
  const auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const auto& p = inst.parameters();
  return {{"bandwidth_per_block", inst.bandwidth_per_block()},
          {"gain", gain},
          {"noise", noise},
          {"amp_inefficiency", vec(p.amp_inefficiency)},
          {"static_power", vec(p.static_power)},
          {"max_power", vec(p.max_power)},
          {"min_rate", vec(p.min_rate)}};
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Solve:
      return "solve";
    case Command::Pareto:
      return "pareto";
    case Command::Trend:
      return "trend";
    case Command::Convergence:
      return "convergence";
  }
  return "unknown";
}

Command command_from_string(std::string_view name) {
  if (name == "solve") return Command::Solve;
  if (name == "pareto") return Command::Pareto;
  if (name == "trend") return Command::Trend;
  if (name == "convergence") return Command::Convergence;
  throw ConfigError("unknown command '" + std::string(name) +
                    "' (expected solve, pareto, trend or convergence)");
}

std::vector<double> RunConfig::resolved_w_grid() const {
  return w_grid.empty() ? weight_grid(w_points) : w_grid;
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  const Node root(doc, "");
  root.only({"command", "scenario", "instance", "scalarization", "solver",
             "seed", "trials", "threads", "pareto", "trend", "convergence",
             "output"});
  RunConfig c;
  if (!root.has("command")) fail("command", "missing");
  try {
    c.command = command_from_string(root.string("command", ""));
  } catch (const ConfigError& e) {
    fail("command", e.what());
  }

  const bool has_scenario = root.has("scenario");
  const bool has_instance = root.has("instance");
  if (has_scenario == has_instance) {
    fail("", "exactly one of 'scenario' or 'instance' must be given");
  }
  if (has_scenario) c.scenario = parse_scenario(root.object("scenario"));
  if (has_instance) c.instance = parse_instance(root.object("instance"));
  if (has_instance && c.command != Command::Solve) {
    fail("instance", "an explicit instance only supports the solve command");
  }

  if (root.has("scalarization")) {
    const Node s = root.object("scalarization");
    s.only({"kind", "weight"});
    try {
      c.scalarization.kind =
          scalarization_kind_from_string(s.string("kind", "weighted_product"));
      c.scalarization.weight =
          s.quantity("weight", Quantity::Dimensionless, c.scalarization.weight);
      c.scalarization.validate();
    } catch (const DomainError& e) {
      fail("scalarization", e.what());
    }
  }

  if (root.has("solver")) {
    const Node s = root.object("solver");
    s.only({"tolerance", "max_outer_iterations", "initial_scale",
            "initial_allocation", "threshold_slack", "barrier"});
    c.solver.tolerance =
        s.quantity("tolerance", Quantity::Dimensionless, c.solver.tolerance);
    c.solver.max_outer_iterations =
        s.integer("max_outer_iterations", c.solver.max_outer_iterations);
    c.solver.threshold_slack = s.quantity("threshold_slack", Quantity::Dimensionless,
                                          c.solver.threshold_slack);
    c.initial_scale =
        s.quantity("initial_scale", Quantity::Dimensionless, c.initial_scale);
    if (s.has("barrier")) c.solver.barrier = parse_barrier(s.object("barrier"));
    if (s.has("initial_allocation")) {
      const json& a = s.raw().at("initial_allocation");
      const std::string p = s.child_path("initial_allocation");
      if (!c.instance) fail(p, "needs an explicit instance");
      const int n = c.instance->n_users();
      const int nk = c.instance->n_blocks();
      if (!a.is_array() || static_cast<int>(a.size()) != n) fail(p, "expected N rows");
      Eigen::MatrixXd m(n, nk);
      for (int i = 0; i < n; ++i) {
        if (!a[i].is_array() || static_cast<int>(a[i].size()) != nk) {
          fail(p, "expected K entries per row");
        }
        for (int k = 0; k < nk; ++k) {
          m(i, k) = Node::read_quantity(a[i][k], p, Quantity::Power);
        }
      }
      c.solver.initial = PowerAllocation(m);
    }
    try {
      c.solver.validate();
    } catch (const DomainError& e) {
      fail("solver", e.what());
    }
    if (!(c.initial_scale > 0.0 && c.initial_scale <= 1.0)) {
      fail("solver.initial_scale", "must lie in (0, 1]");
    }
  }

  c.seed = root.seed("seed", c.seed);
  c.trials = root.integer("trials", c.trials);
  if (c.trials < 1) fail("trials", "must be >= 1");
  c.threads = root.integer("threads", c.threads);

  if (root.has("pareto")) {
    const Node p = root.object("pareto");
    p.only({"w_grid", "w_points", "include_product_ee"});
    c.w_grid = p.list("w_grid", Quantity::Dimensionless, c.w_grid);
    c.w_points = p.integer("w_points", c.w_points);
    c.include_product_ee = p.boolean("include_product_ee", c.include_product_ee);
    if (c.w_grid.empty() && c.w_points < 2) fail("pareto.w_points", "must be >= 2");
    for (double w : c.w_grid) {
      if (!(w >= 0.0 && w <= 1.0)) fail("pareto.w_grid", "weights must lie in [0, 1]");
    }
  }
  if (root.has("trend")) {
    const Node t = root.object("trend");
    t.only({"d2d_distances", "weights"});
    c.d2d_distances = t.list("d2d_distances", Quantity::Distance, c.d2d_distances);
    c.trend_weights = t.list("weights", Quantity::Dimensionless, c.trend_weights);
  }
  if (root.has("convergence")) {
    const Node t = root.object("convergence");
    t.only({"weights", "zetas", "epsilons"});
    c.convergence_weights =
        t.list("weights", Quantity::Dimensionless, c.convergence_weights);
    c.zetas = t.list("zetas", Quantity::Dimensionless, c.zetas);
    c.epsilons = t.list("epsilons", Quantity::Dimensionless, c.epsilons);
  }
  if (root.has("output")) {
    const Node o = root.object("output");
    o.only({"directory"});
    c.output_directory = o.string("directory", c.output_directory);
  }
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  if (c.scenario) j["scenario"] = scenario_json(*c.scenario);
  if (c.instance) j["instance"] = instance_json(*c.instance);
  j["scalarization"] = {{"kind", std::string(to_string(c.scalarization.kind))},
                        {"weight", c.scalarization.weight}};
  json solver = {{"tolerance", c.solver.tolerance},
                 {"max_outer_iterations", c.solver.max_outer_iterations},
                 {"initial_scale", c.initial_scale},
                 {"threshold_slack", c.solver.threshold_slack},
                 {"barrier", barrier_json(c.solver.barrier)}};
  if (c.solver.initial) {
    json rows = json::array();
    const Eigen::MatrixXd& m = c.solver.initial->watts();
    for (int i = 0; i < m.rows(); ++i) {
      json r = json::array();
      for (int k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
      rows.push_back(r);
    }
    solver["initial_allocation"] = rows;
  }
  j["solver"] = solver;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["threads"] = c.threads;
  j["pareto"] = {{"w_grid", c.w_grid},
                 {"w_points", c.w_points},
                 {"include_product_ee", c.include_product_ee}};
  j["trend"] = {{"d2d_distances", c.d2d_distances}, {"weights", c.trend_weights}};
  j["convergence"] = {{"weights", c.convergence_weights},
                      {"zetas", c.zetas},
                      {"epsilons", c.epsilons}};
  j["output"] = {{"directory", c.output_directory}};
  return j;
}

void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not of the form key.path=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &doc;
  std::string::size_type start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("empty component in override key '" + key + "'");
    if (!node->is_object()) {
      throw ConfigError("override '" + key + "' descends into a non-object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

nlohmann::json load_config_document(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  // Emitted records embed the resolved config they were produced from.
  if (doc.is_object() && doc.contains("config") && doc.contains("results")) {
    doc = json(doc.at("config"));
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return doc;
}

}  // namespace eeopt
