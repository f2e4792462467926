// Copyright 2026 The Intent MPC Authors
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

#include "intent_mpc/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "intent_mpc/errors.hpp"

namespace intent_mpc::io {
namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void expect_object(const json& node, const std::string& path,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
  if (!node.is_object()) throw SchemaError(path, "expected an object");
  std::set<std::string> allowed;
  for (const char* key : required) {
    allowed.insert(key);
    if (!node.contains(key)) throw SchemaError(join(path, key), "missing required key");
  }
  for (const char* key : optional) allowed.insert(key);
  for (const auto& item : node.items()) {
    if (!allowed.contains(item.key())) throw SchemaError(join(path, item.key()), "unknown key");
  }
}

double number(const json& node, const std::string& path) {
  if (!node.is_number()) throw SchemaError(path, "expected a number");
  const double value = node.get<double>();
  if (!std::isfinite(value)) throw SchemaError(path, "must be finite");
  return value;
}

double positive(const json& node, const std::string& path) {
  const double value = number(node, path);
  if (!(value > 0.0)) throw SchemaError(path, "must be positive");
  return value;
}

long long integer(const json& node, const std::string& path, long long min_value) {
  if (!node.is_number_integer()) throw SchemaError(path, "expected an integer");
  if (node.is_number_unsigned() &&
      node.get<unsigned long long>() >
          static_cast<unsigned long long>(std::numeric_limits<long long>::max())) {
    throw SchemaError(path, "out of range");
  }
  const auto value = node.get<long long>();
  if (value < min_value) throw SchemaError(path, "must be at least " + std::to_string(min_value));
  return value;
}

std::vector<double> numbers(const json& node, const std::string& path, std::size_t count) {
  if (!node.is_array() || node.size() != count) {
    throw SchemaError(path, "expected an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < count; ++i) {
    values.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return values;
}

Pose pose(const json& node, const std::string& path) {
  const std::vector<double> v = numbers(node, path, 3);
  return {v[0], v[1], v[2]};
}

std::pair<double, double> interval(const json& node, const std::string& path) {
  const std::vector<double> v = numbers(node, path, 2);
  if (v[0] > v[1]) throw SchemaError(path, "lower bound exceeds upper bound");
  return {v[0], v[1]};
}

ControlBounds bounds(const json& node, const std::string& path) {
  expect_object(node, path, {"v", "u"});
  const auto [v_min, v_max] = interval(node["v"], join(path, "v"));
  const auto [u_min, u_max] = interval(node["u"], join(path, "u"));
  if (!(v_min > 0.0)) throw SchemaError(join(path, "v"), "speeds must be positive");
  return {v_min, v_max, u_min, u_max};
}

Eigen::Matrix3d diagonal(const json& node, const std::string& path, bool strictly_positive) {
  const std::vector<double> v = numbers(node, path, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const bool ok = strictly_positive ? v[i] > 0.0 : v[i] >= 0.0;
    if (!ok) {
      throw SchemaError(path + "[" + std::to_string(i) + "]",
                        strictly_positive ? "must be positive" : "must be non-negative");
    }
  }
  return Eigen::Vector3d(v[0], v[1], v[2]).asDiagonal();
}

struct Agent {
  Pose start;
  Pose target;
  ControlBounds bounds;
};

Agent agent(const json& node, const std::string& path) {
  expect_object(node, path, {"start", "target", "bounds"});
  return {pose(node["start"], join(path, "start")), pose(node["target"], join(path, "target")),
          bounds(node["bounds"], join(path, "bounds"))};
}

json pose_json(const Pose& p) { return json::array({p.x, p.y, p.heading}); }

json bounds_json(const ControlBounds& b) {
  json out = json::object();
  out["v"] = json::array({b.v_min, b.v_max});
  out["u"] = json::array({b.u_min, b.u_max});
  return out;
}

json diagonal_json(const Eigen::Matrix3d& m) {
  if (!m.isDiagonal()) throw InputError("scenario files only hold diagonal weights");
  return json::array({m(0, 0), m(1, 1), m(2, 2)});
}

}  // namespace

sim::ScenarioSpec parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  expect_object(doc, "", {"ownship", "intruder", "mpc", "disturbance", "sim"});

  sim::ScenarioSpec spec;
  const Agent own = agent(doc["ownship"], "ownship");
  spec.own_start = own.start;
  spec.own_target = own.target;
  spec.own_bounds = own.bounds;
  const Agent intruder = agent(doc["intruder"], "intruder");
  spec.intruder_start = intruder.start;
  spec.intruder_target = intruder.target;
  spec.intruder_bounds = intruder.bounds;
  if (!(spec.intruder_bounds.u_max > 0.0)) {
    throw SchemaError("intruder.bounds.u", "upper turn rate must be positive");
  }

  const json& mpc = doc["mpc"];
  expect_object(mpc, "mpc", {"N", "N_r", "Q", "Qf", "R", "rho", "mode"});
  spec.horizon = static_cast<int>(integer(mpc["N"], "mpc.N", 1));
  spec.robust_horizon = static_cast<int>(integer(mpc["N_r"], "mpc.N_r", 0));
  if (spec.robust_horizon > spec.horizon) throw SchemaError("mpc.N_r", "must not exceed mpc.N");
  if (spec.robust_horizon > 8) throw SchemaError("mpc.N_r", "at most 8 (3^N_r scenarios)");
  spec.weights.Q = diagonal(mpc["Q"], "mpc.Q", false);
  spec.weights.Qf = diagonal(mpc["Qf"], "mpc.Qf", true);
  spec.weights.R = positive(mpc["R"], "mpc.R");
  spec.rho = positive(mpc["rho"], "mpc.rho");
  if (!mpc["mode"].is_string()) throw SchemaError("mpc.mode", "expected a string");
  const auto mode = mpc::mode_from_string(mpc["mode"].get<std::string>());
  if (!mode) {
    throw SchemaError("mpc.mode",
                      "expected scenario-tree, classic, no-intent or unconstrained");
  }
  spec.mode = *mode;

  const json& dist = doc["disturbance"];
  if (!dist.is_object() || !dist.contains("kind") || !dist["kind"].is_string()) {
    throw SchemaError("disturbance.kind", "expected \"none\" or \"uniform\"");
  }
  const std::string kind = dist["kind"].get<std::string>();
  if (kind == "none") {
    expect_object(dist, "disturbance", {"kind"});
    spec.disturbance = sim::Disturbance::none();
  } else if (kind == "uniform") {
    expect_object(dist, "disturbance", {"kind", "lo_deg_s", "hi_deg_s"});
    const double lo = number(dist["lo_deg_s"], "disturbance.lo_deg_s");
    const double hi = number(dist["hi_deg_s"], "disturbance.hi_deg_s");
    if (lo > hi) throw SchemaError("disturbance.lo_deg_s", "must not exceed hi_deg_s");
    spec.disturbance = sim::Disturbance::uniform(lo * kDegToRad, hi * kDegToRad);
  } else {
    throw SchemaError("disturbance.kind", "expected \"none\" or \"uniform\"");
  }

  const json& s = doc["sim"];
  expect_object(s, "sim", {"max_steps", "target_radius", "seed"});
  const long long max_steps = integer(s["max_steps"], "sim.max_steps", 1);
  if (max_steps > 1'000'000) throw SchemaError("sim.max_steps", "at most 1000000");
  spec.max_steps = static_cast<int>(max_steps);
  spec.target_radius = positive(s["target_radius"], "sim.target_radius");
  if (!s["seed"].is_number_unsigned()) {
    throw SchemaError("sim.seed", "expected a non-negative integer");
  }
  spec.rng_seed = s["seed"].get<std::uint64_t>();

  try {
    spec.validate();
  } catch (const InputError& e) {
    throw SchemaError("", e.what());
  }
  return spec;
}

sim::ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot read scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string scenario_to_json(const sim::ScenarioSpec& spec) {
  nlohmann::ordered_json doc;
  doc["ownship"]["start"] = pose_json(spec.own_start);
  doc["ownship"]["target"] = pose_json(spec.own_target);
  doc["ownship"]["bounds"] = bounds_json(spec.own_bounds);
  doc["intruder"]["start"] = pose_json(spec.intruder_start);
  doc["intruder"]["target"] = pose_json(spec.intruder_target);
  doc["intruder"]["bounds"] = bounds_json(spec.intruder_bounds);
  doc["mpc"]["N"] = spec.horizon;
  doc["mpc"]["N_r"] = spec.robust_horizon;
  doc["mpc"]["Q"] = diagonal_json(spec.weights.Q);
  doc["mpc"]["Qf"] = diagonal_json(spec.weights.Qf);
  doc["mpc"]["R"] = spec.weights.R;
  doc["mpc"]["rho"] = spec.rho;
  doc["mpc"]["mode"] = std::string(mpc::to_string(spec.mode));
  if (spec.disturbance.kind == sim::Disturbance::Kind::Uniform) {
    doc["disturbance"]["kind"] = "uniform";
    doc["disturbance"]["lo_deg_s"] = spec.disturbance.lo / kDegToRad;
    doc["disturbance"]["hi_deg_s"] = spec.disturbance.hi / kDegToRad;
  } else {
    doc["disturbance"]["kind"] = "none";
  }
  doc["sim"]["max_steps"] = spec.max_steps;
  doc["sim"]["target_radius"] = spec.target_radius;
  doc["sim"]["seed"] = spec.rng_seed;
  return doc.dump(2) + "\n";
}

}  // namespace intent_mpc::io
