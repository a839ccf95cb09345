#pragma once

// JSON and CSV encodings used by the command-line tool. Location indices are
// written one-based, matching the usual labelling 1..n of the points.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyap/closed_form.hpp"
#include "lyap/clusters.hpp"
#include "lyap/error.hpp"
#include "lyap/instance.hpp"

namespace lyap {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline MomentInstance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("x") || !j.contains("m")) {
    throw Error(ErrorCode::InvalidArgument, R"(instance must be {"t": .., "x": [..], "m": [..]})");
  }
  if (!j["t"].is_number() || !j["x"].is_array() || !j["m"].is_array()) {
    throw Error(ErrorCode::InvalidArgument, "instance fields have the wrong types");
  }
  std::vector<double> x;
  for (const auto& v : j["x"]) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "x entries must be numbers");
    x.push_back(v.get<double>());
  }
  std::vector<int> m;
  for (const auto& v : j["m"]) {
    if (!v.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "m entries must be integers");
    m.push_back(v.get<int>());
  }
  return validate_instance(j["t"].get<double>(), std::move(x), std::move(m));
}

inline MomentInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline json instance_to_json(const MomentInstance& inst) {
  return json{{"t", inst.t}, {"x", inst.x}, {"m", inst.m}};
}

inline json partition_to_json(const std::vector<std::vector<std::size_t>>& partition) {
  json out = json::array();
  for (const auto& block : partition) {
    json b = json::array();
    for (std::size_t i : block) b.push_back(i + 1);
    out.push_back(std::move(b));
  }
  return out;
}

inline json to_json(const GammaReport& rep) {
  return json{{"gamma1", rep.gamma1},
              {"gamma2", rep.gamma2},
              {"gamma3", rep.gamma3},
              {"max_dev", rep.max_pairwise_dev},
              {"partition", partition_to_json(rep.partition)},
              {"a", rep.minimizer_a},
              {"b", rep.minimizer_b},
              {"structure_ok", rep.structure_ok},
              {"boundary", rep.boundary}};
}

inline GammaReport gamma_report_from_json(const json& j) {
  GammaReport rep;
  rep.gamma1 = j.at("gamma1").get<double>();
  rep.gamma2 = j.at("gamma2").get<double>();
  rep.gamma3 = j.at("gamma3").get<double>();
  rep.max_pairwise_dev = j.at("max_dev").get<double>();
  for (const auto& block : j.at("partition")) {
    std::vector<std::size_t> b;
    for (const auto& i : block) b.push_back(i.get<std::size_t>() - 1);
    rep.partition.push_back(std::move(b));
  }
  rep.minimizer_a = j.at("a").get<std::vector<double>>();
  rep.minimizer_b = j.at("b").get<std::vector<double>>();
  rep.structure_ok = j.at("structure_ok").get<bool>();
  rep.boundary = j.value("boundary", false);
  return rep;
}

inline json to_json(const ClusterResult& res) {
  json events = json::array();
  for (const auto& ev : res.events) {
    json merged = json::array();
    for (const auto& [lo, hi] : ev.merged) merged.push_back({lo + 1, hi + 1});
    events.push_back({{"time", ev.time}, {"merged", std::move(merged)}, {"position", ev.position}});
  }
  json paths = json::array();
  for (std::size_t i = 0; i < res.inertia_paths.size(); ++i) {
    paths.push_back({{"index", i + 1},
                     {"s", res.inertia_paths[i].breakpoints},
                     {"zeta", res.inertia_paths[i].values},
                     {"xi", res.optimal_paths[i].values}});
  }
  json out{{"t", res.t},
           {"q_hat", res.q_hat()},
           {"partition", partition_to_json(res.partition)},
           {"cluster_masses", res.cluster_masses},
           {"terminal_positions", res.terminal_positions},
           {"drifts", res.drifts},
           {"events", std::move(events)},
           {"paths", std::move(paths)}};
  out["next_collision"] = res.next_collision ? json(*res.next_collision) : json(nullptr);
  return out;
}

/// Rows (index, s, zeta, xi) on the shared knot grid.
inline std::string trajectories_csv(const ClusterResult& res) {
  std::ostringstream out;
  out << "index,s,zeta,xi\n";
  for (std::size_t i = 0; i < res.inertia_paths.size(); ++i) {
    const auto& zeta = res.inertia_paths[i];
    const auto& xi = res.optimal_paths[i];
    for (std::size_t q = 0; q < zeta.breakpoints.size(); ++q) {
      out << i + 1 << ',' << format_double(zeta.breakpoints[q]) << ','
          << format_double(zeta.values[q]) << ',' << format_double(xi.values[q]) << '\n';
    }
  }
  return out.str();
}

inline json error_json(const Error& e) {
  return json{{"error", std::string(e.name())}, {"message", e.what()}};
}

}  // namespace lyap
