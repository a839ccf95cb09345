// Command-line front end: gamma | clusters | verify | moments | sweep.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lyap/io.hpp"
#include "lyap/lyap.hpp"
#include "lyap/verify.hpp"

namespace {

using lyap::Error;
using lyap::ErrorCode;
using lyap::json;

struct InstanceArgs {
  std::string input;
  std::optional<double> t;
  std::string x;
  std::string m;
};

struct OutputArgs {
  std::string path;
  std::string format = "json";
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream cell(item);
    T value{};
    cell >> value;
    if (!cell || !cell.eof()) {
      throw Error(ErrorCode::InvalidArgument, std::string("cannot parse ") + what + " entry '" + item + "'");
    }
    out.push_back(value);
  }
  return out;
}

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--input", args.input, "instance JSON file {\"t\":..,\"x\":[..],\"m\":[..]}");
  cmd->add_option("--t", args.t, "macroscopic time");
  cmd->add_option("--x", args.x, "comma-separated locations");
  cmd->add_option("--m", args.m, "comma-separated multiplicities");
}

void add_output_options(CLI::App* cmd, OutputArgs& args, const std::string& default_format) {
  args.format = default_format;
  cmd->add_option("--output", args.path, "output path (default: standard output)");
  cmd->add_option("--format", args.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

lyap::MomentInstance resolve_instance(const InstanceArgs& args) {
  const bool inline_given = args.t.has_value() || !args.x.empty() || !args.m.empty();
  if (!args.input.empty() && inline_given) {
    throw Error(ErrorCode::InvalidArgument, "give either --input or --t/--x/--m, not both");
  }
  if (!args.input.empty()) return lyap::load_instance(args.input);
  if (!args.t || args.x.empty() || args.m.empty()) {
    throw Error(ErrorCode::InvalidArgument, "an instance needs --t, --x and --m (or --input)");
  }
  return lyap::validate_instance(*args.t, parse_list<double>(args.x, "x"), parse_list<int>(args.m, "m"));
}

void emit(const OutputArgs& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out.path);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + out.path);
  file << text;
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + out.path);
}

int cmd_gamma(const InstanceArgs& in, const OutputArgs& out, double tolerance) {
  const auto inst = resolve_instance(in);
  const auto rep = lyap::gamma_report(inst);
  emit(out, lyap::to_json(rep).dump(2) + "\n");
  return rep.consistent(tolerance) ? 0 : 2;
}

int cmd_clusters(const InstanceArgs& in, const OutputArgs& out) {
  const auto inst = resolve_instance(in);
  const auto res = lyap::simulate_inertia(inst);
  if (out.format == "csv") {
    emit(out, lyap::trajectories_csv(res));
  } else {
    auto j = lyap::to_json(res);
    j["instance"] = lyap::instance_to_json(inst);
    emit(out, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_verify(std::uint64_t seed, std::uint64_t count, const std::string& suites,
               const OutputArgs& out) {
  std::vector<std::string> selected;
  if (suites.empty() || suites == "all") {
    selected = lyap::suite_names();
  } else {
    for (const auto& name : parse_list<std::string>(suites, "suite")) {
      const auto& known = lyap::suite_names();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
      }
      selected.push_back(name);
    }
  }
  const unsigned threads = lyap::configured_threads();
  bool all_pass = true;
  json rows = json::array();
  std::ostringstream text;
  for (const auto& name : selected) {
    const auto s = lyap::run_suite(name, seed, count, threads);
    all_pass = all_pass && s.failed == 0;
    rows.push_back({{"suite", s.name}, {"passed", s.passed}, {"failed", s.failed}});
    text << s.name << ": " << s.passed << " passed, " << s.failed << " failed ["
         << (s.failed == 0 ? "PASS" : "FAIL") << "]\n";
  }
  if (out.format == "json") {
    emit(out, json{{"seed", seed}, {"count", count}, {"suites", rows}, {"pass", all_pass}}.dump(2) + "\n");
  } else {
    emit(out, text.str());
  }
  return all_pass ? 0 : 2;
}

struct MomentArgs {
  double T = 10.0;
  int points = 0;
  double sigmas = 8.0;
  std::string offsets;
  std::string rule = "gauss-legendre";
};

int cmd_moments(const InstanceArgs& in, const MomentArgs& args, const OutputArgs& out) {
  const auto inst = resolve_instance(in);
  if (!(args.T > 0.0)) throw Error(ErrorCode::NonPositiveTime, "--T must be positive");
  auto cfg = lyap::default_contour(inst, args.T, args.sigmas, args.points);
  if (!args.offsets.empty()) cfg.offsets = parse_list<double>(args.offsets, "offset");
  cfg.rule = args.rule == "trapezoid" ? lyap::QuadratureRule::Trapezoid
                                      : lyap::QuadratureRule::GaussLegendre;
  cfg.threads = lyap::configured_threads();
  const auto moment = lyap::contour_moment_detailed(args.T, inst, cfg);
  if (!(moment.value > 0.0)) {
    throw Error(ErrorCode::NonPositiveMoment, "quadrature returned a non-positive moment");
  }
  const double rate = std::log(moment.value) / args.T;
  const double gamma = lyap::gamma_report(inst).gamma3;
  json j{{"moment", moment.value},
         {"rate", rate},
         {"gamma", gamma},
         {"gap", std::abs(rate - gamma)},
         {"imag_residual", moment.imag},
         {"T", args.T},
         {"points", cfg.points},
         {"truncation", cfg.truncation},
         {"offsets", cfg.offsets}};
  emit(out, j.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

int cmd_sweep(const InstanceArgs& in, const SweepArgs& args, const OutputArgs& out) {
  const auto base = resolve_instance(in);
  std::optional<std::size_t> x_index;
  if (args.param != "t") {
    if (args.param.size() < 2 || args.param[0] != 'x') {
      throw Error(ErrorCode::InvalidArgument, "--param must be 't' or 'x<j>' (one-based j)");
    }
    const auto j = parse_list<int>(args.param.substr(1), "parameter index");
    if (j.size() != 1 || j[0] < 1 || static_cast<std::size_t>(j[0]) > base.n()) {
      throw Error(ErrorCode::InvalidArgument, "sweep index out of range: " + args.param);
    }
    x_index = static_cast<std::size_t>(j[0] - 1);
  }
  if (args.steps < 0) throw Error(ErrorCode::InvalidArgument, "--steps must be non-negative");

  const auto steps = static_cast<std::uint64_t>(args.steps);
  std::vector<double> grid(steps);
  for (std::uint64_t i = 0; i < steps; ++i) {
    grid[i] = steps == 1 ? args.from
                         : args.from + (args.to - args.from) * static_cast<double>(i) /
                                           static_cast<double>(steps - 1);
  }
  std::vector<lyap::MomentInstance> instances;
  for (double p : grid) {
    auto x = base.x;
    double t = base.t;
    if (x_index) {
      x[*x_index] = p;
    } else {
      t = p;
    }
    instances.push_back(lyap::validate_instance(t, std::move(x), base.m));
  }

  struct Row {
    double gamma = 0.0;
    std::size_t q_hat = 0;
    std::optional<double> s0;
  };
  const auto rows = lyap::parallel_map(steps, lyap::configured_threads(), [&](std::uint64_t i) {
    const auto& inst = instances[i];
    const auto res = lyap::simulate_inertia(inst);
    Row row{lyap::gamma_report(inst).gamma3, res.q_hat(), std::nullopt};
    if (!res.events.empty()) row.s0 = res.events.front().time;
    return row;
  });

  if (out.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      arr.push_back({{"parameter", grid[i]},
                     {"gamma", rows[i].gamma},
                     {"q_hat", rows[i].q_hat},
                     {"s0", rows[i].s0 ? json(*rows[i].s0) : json(nullptr)}});
    }
    emit(out, arr.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "parameter,gamma,q_hat,s0\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << lyap::format_double(grid[i]) << ',' << lyap::format_double(rows[i].gamma) << ','
          << rows[i].q_hat << ',' << (rows[i].s0 ? lyap::format_double(*rows[i].s0) : "") << '\n';
    }
    emit(out, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-point Lyapunov exponents: three routes and their cross-checks"};
  app.require_subcommand(1);

  InstanceArgs gamma_in, clusters_in, moments_in, sweep_in;
  OutputArgs gamma_out, clusters_out, verify_out, moments_out, sweep_out;
  double tolerance = lyap::kTripleTolerance;

  auto* gamma = app.add_subcommand("gamma", "compute gamma by all three routes");
  add_instance_options(gamma, gamma_in);
  add_output_options(gamma, gamma_out, "json");
  gamma->add_option("--tolerance", tolerance, "relative tolerance on the pairwise deviation");

  auto* clusters = app.add_subcommand("clusters", "export inertia / optimal cluster trajectories");
  add_instance_options(clusters, clusters_in);
  add_output_options(clusters, clusters_out, "json");

  std::uint64_t seed = 0;
  std::uint64_t count = 100;
  std::string suites;
  auto* verify = app.add_subcommand("verify", "run the randomized verification suites");
  verify->add_option("--seed", seed, "generator seed");
  verify->add_option("--count", count, "instances per suite");
  verify->add_option("--suites", suites, "comma-separated subset of " +
                                             [] {
                                               std::string s;
                                               for (const auto& n : lyap::suite_names()) s += (s.empty() ? "" : ",") + n;
                                               return s;
                                             }());
  add_output_options(verify, verify_out, "csv");

  MomentArgs moment_args;
  auto* moments = app.add_subcommand("moments", "contour-integral moment and empirical rate");
  add_instance_options(moments, moments_in);
  add_output_options(moments, moments_out, "json");
  moments->add_option("--T", moment_args.T, "scaling parameter T")->required();
  moments->add_option("--points", moment_args.points, "quadrature points per axis");
  moments->add_option("--truncation-sigmas", moment_args.sigmas, "half-width Y in units of 1/sqrt(T t)");
  moments->add_option("--offsets", moment_args.offsets, "comma-separated contour abscissas");
  moments->add_option("--rule", moment_args.rule, "gauss-legendre | trapezoid")
      ->check(CLI::IsMember({"gauss-legendre", "trapezoid"}));

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "tabulate gamma over a parameter grid");
  add_instance_options(sweep, sweep_in);
  add_output_options(sweep, sweep_out, "csv");
  sweep->add_option("--param", sweep_args.param, "t or x<j> (one-based)")->required();
  sweep->add_option("--from", sweep_args.from, "first grid value")->required();
  sweep->add_option("--to", sweep_args.to, "last grid value")->required();
  sweep->add_option("--steps", sweep_args.steps, "number of grid points")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gamma) return cmd_gamma(gamma_in, gamma_out, tolerance);
    if (*clusters) return cmd_clusters(clusters_in, clusters_out);
    if (*verify) return cmd_verify(seed, count, suites, verify_out);
    if (*moments) return cmd_moments(moments_in, moment_args, moments_out);
    if (*sweep) return cmd_sweep(sweep_in, sweep_args, sweep_out);
  } catch (const Error& e) {
    std::cout << lyap::error_json(e).dump() << "\n";
    return 1;
  }
  return 1;
}
