#include "cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kcontract/certify.hpp"
#include "kcontract/serialize.hpp"
#include "kcontract/simulate.hpp"

namespace kcontract::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v == 0.0 ? 0.0 : v);
  return buf;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json provenance(const Tolerances& tol) {
  return {{"tool", "kcontract"},
          {"tool_version", kToolVersion},
          {"tolerances", to_json(tol)},
          {"compound_capacity", compound_capacity()}};
}

// Runs fn and maps library errors onto exit codes.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == Errc::unbounded_nonlinearity)
      err << "hint: add \"bounds\": {\"jac_norm\": L} or {\"jac_topk_sq\": {\"k\": value}} to the "
             "nonlinearity to certify it\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

Matrix leading_frame(int n, int k) { return Matrix::Identity(n, n).leftCols(k); }

NetworkSystem hopfield_instance() {
  constexpr int n = 10;
  return NetworkSystem(0.5, Matrix::Ones(n, n), Nonlinearity::scaled_tanh(0.07, n));
}

std::vector<std::pair<double, Vector>> random_states(int n, int count, std::uint64_t seed) {
  std::vector<std::pair<double, Vector>> out;
  const auto xs = random_initial_conditions(count, n, -5.0, 5.0, seed);
  const auto ts = random_initial_conditions(count, 1, 0.0, 100.0, seed + 1);
  for (int i = 0; i < count; ++i) out.emplace_back(ts[static_cast<std::size_t>(i)](0), xs[static_cast<std::size_t>(i)]);
  return out;
}

bool has_hopfield_structure(const NetworkSystem& net) {
  try {
    hopfield_symmetric_equilibria(net);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string condition_text(const NetworkCondition& cond) {
  return fmt(cond.value) + (cond.holds ? " < " : " >= ") + fmt(cond.threshold);
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::capacity: return kExitCapacity;
    case Errc::unbounded_nonlinearity: return kExitMissingBounds;
    case Errc::parse:
    case Errc::shape:
    case Errc::non_finite:
    case Errc::invalid_dimension:
    case Errc::invalid_order:
    case Errc::invalid_tuple:
    case Errc::invalid_rank:
    case Errc::invalid_parameter:
    case Errc::not_positive_definite:
    case Errc::not_symmetric:
    case Errc::singular_scaling:
    case Errc::wrong_structure: return kExitParse;
    default: return kExitInternal;
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

// compound ------------------------------------------------------------------

int cmd_compound(const CompoundArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.mode != "mult" && args.mode != "add")
      throw Error(Errc::parse, "mode must be 'mult' or 'add'");
    const Matrix a = load_matrix(args.input);
    const CompoundMatrix c =
        args.mode == "mult" ? multiplicative_compound(a, args.k) : additive_compound(a, args.k);
    const json doc{{"mode", args.mode},
                   {"k", args.k},
                   {"base_rows", c.base_rows},
                   {"base_cols", c.base_cols},
                   {"rows", c.body.rows()},
                   {"cols", c.body.cols()},
                   {"matrix", matrix_to_json(c.body)}};
    if (args.out.empty())
      out << doc.dump(2) << '\n';
    else
      write_file_atomic(args.out, doc.dump(2) + "\n");
    return static_cast<int>(kExitPass);
  });
}

// certify -------------------------------------------------------------------

json certify_report(const SystemConfig& cfg) {
  const int k = cfg.analysis.k;
  const Tolerances& tol = cfg.analysis.tolerances;
  json report{{"command", "certify"}, {"kind", cfg.kind}, {"k", k}, {"provenance", provenance(tol)}};

  Certificate cert;
  std::optional<LurieSystem> lurie;
  if (cfg.kind == "network") {
    const NetworkSystem net = build_network(cfg);
    const NetworkCondition cond = network_condition(net, k);
    report["network_condition"] = {{"value", cond.value},
                                   {"threshold", cond.threshold},
                                   {"margin", cond.gap()},
                                   {"holds", cond.holds},
                                   {"text", condition_text(cond)}};
    cert = check_network_k_contraction(net, k, tol);
    if (cond.holds) {
      const ScalarSearchResult search = find_scalar_gamma_p(net, k, tol);
      report["scalar_search"] = to_json(search);
      lurie = network_to_lurie(net, search.gamma);
    }
    report["method"] = "network small-gain condition with scalar P";
  } else {
    lurie = build_lurie(cfg);
    CheckOptions opts;
    opts.tol = tol;
    if (cfg.analysis.p && cfg.analysis.eta1) {
      cert = check_theorem1(*lurie, k, *cfg.analysis.p, *cfg.analysis.eta1, *cfg.analysis.eta2, opts);
      report["method"] = "riccati and gain conditions, supplied P and etas";
    } else if (cfg.analysis.p) {
      cert = certify_with_p(*lurie, k, *cfg.analysis.p, opts);
      report["method"] = "riccati and gain conditions, supplied P, best etas";
    } else {
      cert = search_scalar_p(*lurie, k, tol);
      report["method"] = "riccati and gain conditions, scalar P search";
    }
    if (k == 1 && cfg.analysis.p) {
      const AriResult ari = check_ari_k1(*lurie, *cfg.analysis.p, tol);
      report["ari_k1"] = {{"holds", ari.holds}, {"margin", ari.margin}};
    }
  }
  report["certificate"] = to_json(cert);

  if (cert.passed && lurie) {
    constexpr int kSamples = 1000;
    const double worst = sampled_mu_bound(*lurie, k, cert.scaling,
                                          random_states(lurie->dimension(), kSamples, 1));
    report["sampled_check"] = {{"samples", kSamples},
                               {"max_scaled_measure", worst},
                               {"certified_bound", -cert.rate_bound},
                               {"consistent", worst <= -cert.rate_bound + tol.sampled_slack}};
  }
  return report;
}

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SystemConfig cfg = load_config(args.config);
    const json report = certify_report(cfg);
    const json& cert = report["certificate"];
    const bool passed = cert["passed"].get<bool>();

    if (!args.out.empty()) write_file_atomic(args.out, report.dump(2) + "\n");
    if (args.json) {
      out << report.dump(2) << '\n';
    } else {
      out << "kcontract certify: " << cfg.kind << " system, n=" << system_dimension(cfg)
          << ", k=" << cfg.analysis.k << '\n';
      out << "  method     " << report["method"].get<std::string>() << '\n';
      if (report.contains("network_condition")) {
        const json& c = report["network_condition"];
        out << "  condition  L^2 sum_{i<=k} sigma_i^2(W) vs alpha^2 k: " << c["text"].get<std::string>()
            << "  (margin " << fmt(c["margin"].get<double>()) << ")\n";
      }
      out << "  eta1 = " << fmt(cert["eta1"].get<double>(), 9) << ", eta2 = "
          << fmt(cert["eta2"].get<double>(), 9) << ", rate bound = "
          << fmt(cert["rate_bound"].get<double>(), 9) << '\n';
      for (const auto& [name, value] : cert["margins"].items())
        out << "  margin     " << name << " = " << fmt(value.get<double>(), 9) << '\n';
      for (const auto& a : cert["assumptions"]) out << "  assumes    " << a.get<std::string>() << '\n';
      if (report.contains("sampled_check")) {
        const json& s = report["sampled_check"];
        out << "  sampled    max mu over " << s["samples"].get<int>() << " states = "
            << fmt(s["max_scaled_measure"].get<double>(), 9) << " (bound "
            << fmt(s["certified_bound"].get<double>(), 9) << ")\n";
      }
      out << "  result     " << (passed ? "PASSED" : "FAILED") << '\n';
    }
    return static_cast<int>(passed ? kExitPass : kExitCertifiedFail);
  });
}

// simulate ------------------------------------------------------------------

namespace {

std::vector<Vector> parse_x0(const std::string& text, int n) {
  if (text == "zeros") return {Vector::Zero(n)};
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error(Errc::parse, "bad --x0 entry '" + cell + "'");
    }
  }
  if (static_cast<int>(values.size()) != n)
    throw Error(Errc::parse, "--x0 needs " + std::to_string(n) + " comma-separated values");
  return {Eigen::Map<Vector>(values.data(), n)};
}

struct RunRecord {
  Vector x0;
  std::optional<Trajectory> traj;
  std::optional<double> escape_time;
  std::optional<double> fitted_rate;
};

EquilibriumSet endpoint_equilibria(const Dynamics& dyn, const std::vector<RunRecord>& runs, double tol) {
  EquilibriumSet eq;
  eq.residual_tol = 1e-6;
  for (const auto& run : runs) {
    if (!run.traj) continue;
    const Vector& x = run.traj->states.back();
    if (dyn.field(run.traj->times.back(), x).norm() > eq.residual_tol) continue;
    bool known = false;
    for (const auto& p : eq.points) known = known || (p - x).norm() <= tol;
    if (!known) eq.points.push_back(x);
  }
  return eq;
}

}  // namespace

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SystemConfig cfg = load_config(args.config);
    const int n = system_dimension(cfg);
    const int k = args.k.value_or(cfg.analysis.k);
    if (k < 1 || k > n) throw Error(Errc::parse, "--k must lie in [1, n]");
    if (args.x0.empty() == (args.random <= 0))
      throw Error(Errc::parse, "give exactly one of --x0 or --random N");

    std::optional<NetworkSystem> net;
    Dynamics dyn;
    if (cfg.kind == "network") {
      net = build_network(cfg);
      dyn = make_dynamics(*net);
    } else {
      dyn = make_dynamics(build_lurie(cfg));
    }
    const ScalingQ q = cfg.analysis.p ? symmetric_sqrt(*cfg.analysis.p) : ScalingQ::identity(n);

    std::optional<double> certified_rate;
    try {
      SystemConfig certify_cfg = cfg;
      certify_cfg.analysis.k = k;
      const json rep = certify_report(certify_cfg);
      if (rep["certificate"]["passed"].get<bool>())
        certified_rate = rep["certificate"]["rate_bound"].get<double>();
    } catch (const Error&) {
    }

    IntegrationOptions opts;
    opts.t_end = args.t_end;
    opts.dt = args.dt;
    opts.record_every =
        args.record_every > 0 ? args.record_every : std::max(1, static_cast<int>(std::lround(0.01 / args.dt)));

    const std::vector<Vector> starts =
        args.x0.empty() ? random_initial_conditions(args.random, n, args.lo, args.hi, args.seed)
                        : parse_x0(args.x0, n);

    std::vector<RunRecord> runs;
    for (const Vector& x0 : starts) {
      RunRecord run{x0, std::nullopt, std::nullopt, std::nullopt};
      try {
        run.traj = integrate_with_variational(dyn, x0, leading_frame(n, k), q, opts);
        try {
          run.fitted_rate = estimate_decay_rate(*run.traj, 0.2);
        } catch (const Error&) {
        }
      } catch (const DivergenceError& e) {
        run.escape_time = e.escape_time();
      }
      runs.push_back(std::move(run));
    }

    EquilibriumSet eq;
    std::string eq_source;
    if (net && has_hopfield_structure(*net)) {
      eq = hopfield_symmetric_equilibria(*net);
      eq_source = "symmetric network equilibria";
    } else {
      eq = endpoint_equilibria(dyn, runs, args.tol);
      eq_source = "stationary trajectory endpoints";
    }

    fs::create_directories(args.outdir);
    json trajectories = json::array();
    std::vector<int> counts(eq.points.size() + 1, 0);
    int diverged = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const RunRecord& run = runs[i];
      json entry{{"index", i}, {"x0", vector_to_json(run.x0)}};
      if (!run.traj) {
        ++diverged;
        entry["diverged"] = true;
        entry["escape_time"] = *run.escape_time;
        entry["classification"] = nullptr;
        trajectories.push_back(entry);
        continue;
      }
      char name[48];
      std::snprintf(name, sizeof name, "trajectory_%03zu.csv", i);
      std::ostringstream csv;
      write_trajectory_csv(csv, *run.traj);
      write_file_atomic((fs::path(args.outdir) / name).string(), csv.str());

      const auto cls = classify_convergence(*run.traj, eq, args.tol);
      ++counts[cls ? *cls : eq.points.size()];
      entry["diverged"] = false;
      entry["csv"] = name;
      entry["final_state"] = vector_to_json(run.traj->states.back());
      entry["classification"] = cls ? json(*cls) : json(nullptr);
      entry["rank_collapsed"] = run.traj->rank_collapsed;
      entry["fitted_rate"] = run.fitted_rate ? json(*run.fitted_rate) : json(nullptr);
      if (certified_rate && run.fitted_rate)
        entry["meets_certified_rate"] = *run.fitted_rate <= -*certified_rate + 0.01;
      trajectories.push_back(entry);
    }

    json equilibria = json::array();
    for (const auto& p : eq.points) equilibria.push_back(vector_to_json(p));
    json summary{{"command", "simulate"},
                 {"kind", cfg.kind},
                 {"k", k},
                 {"seed", args.seed},
                 {"dt", opts.dt},
                 {"t_end", opts.t_end},
                 {"record_every", opts.record_every},
                 {"classification_tol", args.tol},
                 {"skip_fraction", 0.2},
                 {"equilibria_source", eq_source},
                 {"equilibria", equilibria},
                 {"certified_rate", certified_rate ? json(*certified_rate) : json(nullptr)},
                 {"converged", static_cast<int>(runs.size()) - diverged - counts.back()},
                 {"unclassified", counts.back()},
                 {"diverged", diverged},
                 {"trajectories", trajectories},
                 {"provenance", provenance(cfg.analysis.tolerances)}};
    write_file_atomic((fs::path(args.outdir) / "summary.json").string(), summary.dump(2) + "\n");

    out << "kcontract simulate: " << runs.size() << " trajectories, dt=" << fmt(opts.dt)
        << ", t_end=" << fmt(opts.t_end) << ", k=" << k << ", seed=" << args.seed << '\n';
    out << "  equilibria (" << eq_source << "): " << eq.points.size() << '\n';
    for (std::size_t i = 0; i < eq.points.size(); ++i)
      out << "    e" << (i + 1) << ": " << counts[i] << " trajectories\n";
    out << "  unclassified: " << counts.back() << ", diverged: " << diverged << '\n';
    if (certified_rate) out << "  certified rate: " << fmt(*certified_rate) << '\n';
    out << "  output: " << (fs::path(args.outdir) / "summary.json").string() << '\n';
    return static_cast<int>(kExitPass);
  });
}

// demo-hopfield -------------------------------------------------------------

int cmd_demo_hopfield(const DemoArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto started = std::chrono::steady_clock::now();
    const NetworkSystem net = hopfield_instance();
    const int n = net.dimension();
    out << "Hopfield network: n=" << n << ", alpha=" << fmt(net.alpha())
        << ", W = 1 1^T, f(x) = 0.07 tanh(x)\n";

    json report{{"command", "demo-hopfield"}, {"provenance", provenance(Tolerances{})}};
    json conditions = json::array();
    for (int k : {1, 2}) {
      const NetworkCondition cond = network_condition(net, k);
      const Certificate cert = check_network_k_contraction(net, k);
      out << "  k=" << k << ": ||J_f||^2 sum_{i<=" << k << "} sigma_i^2(W) vs alpha^2 k: "
          << condition_text(cond) << "  -> "
          << (cert.passed ? std::to_string(k) + "-contractive" : std::string("not certified"))
          << " (margin " << fmt(cond.gap()) << ")\n";
      conditions.push_back({{"k", k},
                            {"value", cond.value},
                            {"threshold", cond.threshold},
                            {"margin", cond.gap()},
                            {"certificate", to_json(cert)}});
    }
    report["conditions"] = conditions;

    const ScalarSearchResult search = find_scalar_gamma_p(net, 2);
    const double rate = 0.5 * (search.eta1 + search.eta2);
    out << "  Lurie realization: gamma=" << fmt(search.gamma) << ", p=" << fmt(search.p)
        << ", eta1=" << fmt(search.eta1) << ", eta2=" << fmt(search.eta2) << ", rate bound=" << fmt(rate)
        << (search.feasible ? "" : "  [re-validation FAILED]") << '\n';
    report["scalar_search"] = to_json(search);

    const EquilibriumSet eq = hopfield_symmetric_equilibria(net);
    double worst_residual = 0.0;
    for (const auto& p : eq.points) worst_residual = std::max(worst_residual, evaluate_field(net, 0.0, p).norm());
    const double magnitude = eq.points.size() > 1 ? eq.points[1](0) : 0.0;
    out << "  equilibria: 0, +-" << fmt(magnitude, 8) << " * 1  (max field residual "
        << fmt(worst_residual, 3) << ")\n";
    json eq_json = json::array();
    for (const auto& p : eq.points) eq_json.push_back(vector_to_json(p));
    report["equilibria"] = {{"points", eq_json}, {"magnitude", magnitude}, {"max_residual", worst_residual}};

    const Dynamics dyn = make_dynamics(net);
    const ScalingQ q = symmetric_sqrt(search.p * Matrix::Identity(n, n));
    IntegrationOptions opts;
    opts.t_end = args.t_end;
    opts.dt = args.dt;
    opts.record_every = std::max(1, static_cast<int>(std::lround(0.1 / args.dt)));

    const auto starts = random_initial_conditions(args.trajectories, n, -3.0, 3.0, args.seed);
    std::vector<int> counts(eq.points.size() + 1, 0);
    double worst_slope = -INFINITY;
    int within_bound = 0;
    int fitted = 0;
    json runs = json::array();
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const Trajectory traj = integrate_with_variational(dyn, starts[i], leading_frame(n, 2), q, opts);
      const auto cls = classify_convergence(traj, eq, 1e-4);
      ++counts[cls ? *cls : eq.points.size()];
      std::optional<double> slope;
      try {
        slope = estimate_decay_rate(traj, 0.2);
      } catch (const Error&) {
      }
      if (slope) {
        ++fitted;
        worst_slope = std::max(worst_slope, *slope);
        if (*slope <= -rate + 0.01) ++within_bound;
      }
      runs.push_back({{"index", i},
                      {"classification", cls ? json(*cls) : json(nullptr)},
                      {"fitted_rate", slope ? json(*slope) : json(nullptr)}});
      if (!args.outdir.empty()) {
        char name[48];
        std::snprintf(name, sizeof name, "trajectory_%03zu.csv", i);
        std::ostringstream csv;
        write_trajectory_csv(csv, traj);
        write_file_atomic((fs::path(args.outdir) / name).string(), csv.str());
      }
    }
    const int converged = static_cast<int>(starts.size()) - counts.back();
    out << "  simulated " << starts.size() << " trajectories (seed " << args.seed << ", dt "
        << fmt(args.dt) << ", t_end " << fmt(args.t_end) << ", x0 uniform in [-3,3]^" << n << ")\n";
    out << "  convergence: " << converged << "/" << starts.size() << " converged  [e1=0: " << counts[0];
    for (std::size_t i = 1; i < eq.points.size(); ++i) out << ", e" << (i + 1) << ": " << counts[i];
    out << ", none: " << counts.back() << "]\n";
    out << "  volume decay log|Q^(2) X^(2)|: worst slope " << fmt(worst_slope) << " vs bound "
        << fmt(-rate) << "; " << within_bound << "/" << fitted << " within bound + 0.01\n";

    report["simulation"] = {{"seed", args.seed},
                            {"dt", args.dt},
                            {"t_end", args.t_end},
                            {"record_every", opts.record_every},
                            {"converged", converged},
                            {"total", starts.size()},
                            {"counts", counts},
                            {"worst_slope", worst_slope},
                            {"rate_bound", rate},
                            {"within_bound", within_bound},
                            {"runs", runs}};
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report["elapsed_seconds"] = elapsed;
    if (!args.json_out.empty()) write_file_atomic(args.json_out, report.dump(2) + "\n");
    out << "  elapsed " << fmt(elapsed, 3) << " s\n";
    return static_cast<int>(kExitPass);
  });
}

// entry point ---------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-contraction certificates for Lurie and network systems"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CompoundArgs compound;
  auto* compound_cmd = app.add_subcommand("compound", "multiplicative or additive compound of a matrix");
  compound_cmd->add_option("input", compound.input, "matrix file (JSON nested arrays or CSV)")->required();
  compound_cmd->add_option("--k", compound.k, "compound order")->required();
  compound_cmd->add_option("--mode", compound.mode, "mult or add")->check(CLI::IsMember({"mult", "add"}));
  compound_cmd->add_option("--out", compound.out, "write JSON here instead of stdout");

  CertifyArgs certify;
  auto* certify_cmd = app.add_subcommand("certify", "check the k-contraction sufficient conditions");
  certify_cmd->add_option("config", certify.config, "system description (JSON)")->required();
  certify_cmd->add_flag("--json", certify.json, "print the JSON report instead of text");
  certify_cmd->add_option("--out", certify.out, "also write the JSON report here");

  SimulateArgs simulate;
  std::optional<int> sim_k;
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate trajectories and volume dynamics");
  simulate_cmd->add_option("config", simulate.config, "system description (JSON)")->required();
  simulate_cmd->add_option("--x0", simulate.x0, "comma-separated initial state, or 'zeros'");
  simulate_cmd->add_option("--random", simulate.random, "number of random initial states");
  simulate_cmd->add_option("--seed", simulate.seed, "seed for random initial states");
  simulate_cmd->add_option("--k", sim_k, "number of tangent vectors (default analysis.k)");
  simulate_cmd->add_option("--tend", simulate.t_end, "final time");
  simulate_cmd->add_option("--dt", simulate.dt, "RK4 step");
  simulate_cmd->add_option("--lo", simulate.lo, "lower corner of the random box");
  simulate_cmd->add_option("--hi", simulate.hi, "upper corner of the random box");
  simulate_cmd->add_option("--record-every", simulate.record_every, "record every n-th step");
  simulate_cmd->add_option("--tol", simulate.tol, "classification tolerance");
  simulate_cmd->add_option("--outdir", simulate.outdir, "directory for CSV and summary.json");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-hopfield", "certify and simulate the 10-neuron Hopfield example");
  demo_cmd->add_option("--trajectories", demo.trajectories, "number of random initial states");
  demo_cmd->add_option("--seed", demo.seed, "seed for initial states");
  demo_cmd->add_option("--tend", demo.t_end, "final time");
  demo_cmd->add_option("--dt", demo.dt, "RK4 step");
  demo_cmd->add_option("--json", demo.json_out, "write the JSON report here");
  demo_cmd->add_option("--outdir", demo.outdir, "write trajectory CSVs here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitParse;
  }

  if (compound_cmd->parsed()) return cmd_compound(compound, out, err);
  if (certify_cmd->parsed()) return cmd_certify(certify, out, err);
  if (simulate_cmd->parsed()) {
    simulate.k = sim_k;
    return cmd_simulate(simulate, out, err);
  }
  return cmd_demo_hopfield(demo, out, err);
}

}  // namespace kcontract::cli
