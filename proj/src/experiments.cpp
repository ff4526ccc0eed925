// Copyright 2026 the mfre authors
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

#include "mfre/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mfre/action.hpp"
#include "mfre/csv.hpp"
#include "mfre/lattice_chain.hpp"
#include "mfre/parallel.hpp"
#include "mfre/simulate.hpp"

namespace mfre {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* kVersion = "0.1.0";

const std::vector<std::string> kKinds = {
    "ode",        "simulate",      "stationary", "entropy-limit",
    "descent-check", "jt",         "quasipotential"};

bool kind_needs_model(const std::string& kind) { return kind != "descent-check"; }

std::string resolve_relative(const std::string& base_file, const std::string& ref) {
  fs::path p(ref);
  if (p.is_absolute()) return ref;
  return (fs::path(base_file).parent_path() / p).string();
}

bool get_vec(const json& j, Vec& out) {
  if (!j.is_array()) return false;
  out.clear();
  for (const auto& v : j) {
    if (!v.is_number()) return false;
    out.push_back(v.get<double>());
  }
  return true;
}

bool get_vec_list(const json& j, std::vector<Vec>& out) {
  if (!j.is_array()) return false;
  out.clear();
  if (!j.empty() && j[0].is_number()) {  // single vector accepted
    Vec v;
    if (!get_vec(j, v)) return false;
    out.push_back(std::move(v));
    return true;
  }
  for (const auto& e : j) {
    Vec v;
    if (!get_vec(e, v)) return false;
    out.push_back(std::move(v));
  }
  return true;
}

bool get_int_list(const json& j, std::vector<long long>& out) {
  out.clear();
  if (j.is_number_integer()) {
    out.push_back(j.get<long long>());
    return true;
  }
  if (!j.is_array()) return false;
  for (const auto& v : j) {
    if (!v.is_number_integer()) return false;
    out.push_back(v.get<long long>());
  }
  return true;
}

// least-squares fit of value ~ a + b/N; returns a
double extrapolate_in_1_over_n(const std::vector<long long>& ns, const Vec& values) {
  const double n = static_cast<double>(ns.size());
  double sx = 0.0, sxx = 0.0, sf = 0.0, sxf = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = 1.0 / static_cast<double>(ns[i]);
    sx += x;
    sxx += x * x;
    sf += values[i];
    sxf += x * values[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return values.back();
  return (sxx * sf - sx * sxf) / det;
}

struct Staged {
  std::map<std::string, std::string> files;

  std::ostringstream& open(const std::string& name) {
    auto [it, inserted] = buffers_.try_emplace(name);
    (void)inserted;
    return it->second;
  }
  void finalize() {
    for (auto& [name, ss] : buffers_) files[name] = ss.str();
    buffers_.clear();
  }

 private:
  std::map<std::string, std::ostringstream> buffers_;
};

ProbabilityVector prob_from(const Vec& v, const std::string& what) {
  try {
    return ProbabilityVector(v);
  } catch (const std::exception& e) {
    throw std::runtime_error(what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// validation

void check_prob_vector(const json& params, const std::string& field, int d,
                       bool required, Diagnostics& diag) {
  if (!params.contains(field)) {
    if (required) diag.add("params." + field, "missing");
    return;
  }
  Vec v;
  if (!get_vec(params[field], v) || (d > 0 && static_cast<int>(v.size()) != d)) {
    diag.add("params." + field, "must be a length-d numeric array");
    return;
  }
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) diag.add("params." + field, "has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    diag.add("params." + field, "entries sum to " + std::to_string(sum) + ", not 1");
}

void check_lattice_cap(const json& params, const std::string& field, int d,
                       std::size_t cap, Diagnostics& diag) {
  if (!params.contains(field) || d <= 0) return;
  std::vector<long long> ns;
  if (!get_int_list(params[field], ns)) {
    diag.add("params." + field, "must be an integer or integer array");
    return;
  }
  for (long long n : ns) {
    if (n < 1) {
      diag.add("params." + field, "entries must be >= 1");
      return;
    }
    const double ls = LatticeEnumeration::log_size(n, d);
    if (ls > std::log(static_cast<double>(cap)) + 1e-9) {
      std::ostringstream msg;
      msg << "N=" << n << " gives a lattice of ~" << std::llround(std::exp(ls))
          << " points, above the cap of " << cap;
      diag.add("params." + field, msg.str());
      return;
    }
  }
}

void validate_params(const ExperimentConfig& cfg, int model_d, Diagnostics& diag) {
  const json& p = cfg.params;
  if (!p.is_object()) {
    diag.add("params", "missing table");
    return;
  }
  auto need_positive = [&](const std::string& field) {
    if (!p.contains(field) || !p[field].is_number() || p[field].get<double>() <= 0.0)
      diag.add("params." + field, "missing or not a positive number");
  };
  if (cfg.kind == "ode") {
    check_prob_vector(p, "p0", model_d, true, diag);
    need_positive("horizon");
    need_positive("step");
  } else if (cfg.kind == "simulate") {
    check_prob_vector(p, "p0", model_d, true, diag);
    need_positive("horizon");
    need_positive("snapshot_dt");
    if (!p.contains("N")) diag.add("params.N", "missing");
    std::vector<long long> ns;
    if (p.contains("N") && !get_int_list(p["N"], ns))
      diag.add("params.N", "must be an integer or integer array");
    if (p.contains("replicas") &&
        (!p["replicas"].is_number_integer() || p["replicas"].get<long long>() < 1))
      diag.add("params.replicas", "must be a positive integer");
  } else if (cfg.kind == "stationary") {
    if (!p.contains("N")) diag.add("params.N", "missing");
    check_lattice_cap(p, "N", model_d, cfg.lattice_cap, diag);
  } else if (cfg.kind == "entropy-limit") {
    if (!p.contains("N")) diag.add("params.N", "missing");
    check_lattice_cap(p, "N", model_d, cfg.lattice_cap, diag);
    std::vector<Vec> qs;
    if (!p.contains("q") || !get_vec_list(p["q"], qs))
      diag.add("params.q", "missing or not a probability vector (or list of them)");
  } else if (cfg.kind == "descent-check") {
    if (!p.contains("rate_matrix") || !p["rate_matrix"].is_array())
      diag.add("params.rate_matrix", "missing d x d array");
    check_prob_vector(p, "p0", 0, true, diag);
    check_prob_vector(p, "q0", 0, true, diag);
    need_positive("horizon");
    need_positive("step");
  } else if (cfg.kind == "jt") {
    check_prob_vector(p, "q", model_d, true, diag);
    if (!p.contains("t")) diag.add("params.t", "missing time list");
    if (!p.contains("N")) diag.add("params.N", "missing");
    check_lattice_cap(p, "N", model_d, cfg.lattice_cap, diag);
    if (!p.contains("init") || !p["init"].is_string() ||
        (p["init"].get<std::string>() != "product" &&
         p["init"].get<std::string>() != "point"))
      diag.add("params.init", "must be \"product\" or \"point\"");
    check_prob_vector(p, "init_point", model_d, true, diag);
  } else if (cfg.kind == "quasipotential") {
    check_prob_vector(p, "q", model_d, true, diag);
    if (!p.contains("horizons")) diag.add("params.horizons", "missing");
  } else {
    diag.add("kind", "unknown experiment kind '" + cfg.kind + "'");
  }
}

// ---------------------------------------------------------------------------
// runners; each fills staged CSV files and a headline object

void run_ode(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
             json& headline) {
  const Vec p0v = cfg.params["p0"].get<Vec>();
  const double horizon = cfg.params["horizon"].get<double>();
  const double step = cfg.params["step"].get<double>();
  const RateFamily family = limit_rate_family(mf.model);
  const Trajectory traj =
      solve_forward(family, prob_from(p0v, "params.p0"), horizon, step);

  auto& os = out.open("trajectory.csv");
  csv::Writer w(os);
  w.comment("column t: solve_forward grid time");
  for (int i = 0; i < mf.space.d; ++i)
    w.comment("column p_" + std::to_string(i + 1) +
              ": solve_forward trajectory component (" + mf.space.labels[i] + ")");
  std::vector<std::string> header = {"t"};
  for (int i = 0; i < mf.space.d; ++i) header.push_back("p_" + std::to_string(i + 1));
  w.row(header);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<std::string> row = {csv::real(traj.times[k])};
    for (int i = 0; i < mf.space.d; ++i) row.push_back(csv::real(traj.points[k][i]));
    w.row(row);
  }
  headline["final_point"] = traj.points.back().weights();
  headline["grid_points"] = traj.times.size();
}

void run_simulate(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
                  json& headline) {
  const json& p = cfg.params;
  const ProbabilityVector p0 = prob_from(p["p0"].get<Vec>(), "params.p0");
  const double horizon = p["horizon"].get<double>();
  const double snapshot_dt = p["snapshot_dt"].get<double>();
  const long long replicas = p.value("replicas", 1);
  const bool keep_events = p.value("keep_events", true);
  std::vector<long long> ns;
  get_int_list(p["N"], ns);

  SimulateOptions options;
  for (double t = 0.0; t <= horizon + 1e-12; t += snapshot_dt)
    options.snapshot_times.push_back(std::min(t, horizon));
  options.keep_events = keep_events;

  auto& snap_os = out.open("snapshots.csv");
  csv::Writer snap(snap_os);
  snap.comment("column N: particle count; column replica: replica index");
  snap.comment("column t: snapshot time (simulate_empirical)");
  snap.comment("columns count_*: lattice state of the empirical measure");
  snap.comment("column gap: l1 distance to the solve_forward trajectory at t");
  {
    std::vector<std::string> header = {"N", "replica", "t"};
    for (int i = 0; i < mf.space.d; ++i) header.push_back("count_" + std::to_string(i + 1));
    header.push_back("gap");
    snap.row(header);
  }

  const RateFamily limit = limit_rate_family(mf.model);
  json gap_stats = json::array();
  for (long long N : ns) {
    const Trajectory ode = solve_forward(limit, p0, horizon, 1e-2);
    // initial lattice point nearest p0
    std::vector<long long> counts(mf.space.d, 0);
    {
      long long assigned = 0;
      for (int i = 0; i < mf.space.d; ++i) {
        counts[i] = static_cast<long long>(std::floor(p0[i] * static_cast<double>(N)));
        assigned += counts[i];
      }
      int i = 0;
      while (assigned < N) {
        ++counts[i % mf.space.d];
        ++assigned;
        ++i;
      }
    }
    const LatticeMeasure init(N, counts);
    const RateFamily family = prelimit_rate_family(mf.model, N);

    std::vector<SimulationRun> runs(static_cast<std::size_t>(replicas));
    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
          SimulateOptions opts = options;
          opts.stream = rep;
          runs[rep] = simulate_empirical(family, N, init, horizon, cfg.seed, opts);
        },
        Exec::parallel);

    Vec gaps;
    for (std::size_t rep = 0; rep < runs.size(); ++rep) {
      const double gap = lln_gap(runs[rep], ode);
      gaps.push_back(gap);
      for (const auto& [t, lm] : runs[rep].snapshots) {
        std::vector<std::string> row = {std::to_string(N), std::to_string(rep),
                                        csv::real(t)};
        for (long long c : lm.counts) row.push_back(std::to_string(c));
        Vec target = ode.at(t);
        row.push_back(csv::real(l1_distance(lm.to_probability().span(), target)));
        snap.row(row);
      }
    }
    Vec sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    json stat;
    stat["seed"] = cfg.seed;
    stat["N"] = N;
    stat["horizon"] = horizon;
    stat["replicas"] = replicas;
    stat["gap_median"] = sorted[sorted.size() / 2];
    stat["gap_max"] = sorted.back();
    stat["gap_mean"] =
        std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
    gap_stats.push_back(stat);

    if (keep_events && N == ns.front()) {
      auto& ev_os = out.open("events.csv");
      csv::Writer ev(ev_os);
      ev.comment("replica 0 event log (simulate_empirical)");
      ev.comment("column t: jump time; from/to: particle state change");
      ev.row({"t", "from", "to"});
      for (const auto& e : runs[0].events)
        ev.row({csv::real(e.time), std::to_string(e.from), std::to_string(e.to)});
    }
  }
  headline["gap_statistics"] = gap_stats;
}

void run_stationary(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
                    json& headline) {
  std::vector<long long> ns;
  get_int_list(cfg.params["N"], ns);
  json per_n = json::array();
  for (long long N : ns) {
    const RateFamily family = prelimit_rate_family(mf.model, N);
    const LatticeGenerator gen = build_generator(family, N, cfg.lattice_cap);
    const LatticeDistribution pi = stationary_distribution(gen);
    const LatticeDistribution closed = gibbs_pushforward(gen.lattice, mf.model);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (closed.weights[i] > 1e-300)
        max_rel = std::max(max_rel,
                           std::abs(pi.weights[i] - closed.weights[i]) /
                               closed.weights[i]);
    }
    json entry;
    entry["N"] = N;
    entry["residual"] = stationary_residual(gen, pi);
    entry["max_rel_error_vs_closed_form"] = max_rel;
    per_n.push_back(entry);

    auto& os = out.open("stationary_N" + std::to_string(N) + ".csv");
    write_lattice_csv(os, pi);
  }
  headline["stationary"] = per_n;
}

void run_entropy_limit(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
                       json& headline) {
  std::vector<long long> ns;
  get_int_list(cfg.params["N"], ns);
  std::vector<Vec> qs;
  get_vec_list(cfg.params["q"], qs);
  const int refinement = cfg.params.value("refinement", 512);

  const double C = gibbs_constant_C(mf.model, refinement);

  auto& os = out.open("entropy_limit.csv");
  csv::Writer w(os);
  w.comment("column N: particle count");
  w.comment("columns q_*: product-law marginal");
  w.comment("column scaled_entropy: scaled_product_entropy against the Gibbs law");
  w.comment("column lyapunov: lyapunov_F with C from gibbs_constant_C");
  w.comment("column gap: scaled_entropy - lyapunov");
  w.comment("column log_partition_gap: (1/N) log Z_N + C (log_partition_lattice)");
  {
    std::vector<std::string> header = {"N"};
    for (int i = 0; i < mf.space.d; ++i) header.push_back("q_" + std::to_string(i + 1));
    header.insert(header.end(), {"scaled_entropy", "lyapunov", "gap",
                                 "log_partition_gap"});
    w.row(header);
  }

  double final_gap = 0.0;
  for (long long N : ns) {
    auto lattice = std::make_shared<const LatticeEnumeration>(N, mf.space.d,
                                                              cfg.lattice_cap);
    const LatticeDistribution gibbs = gibbs_pushforward(lattice, mf.model);
    const double logz_gap =
        log_partition_lattice(lattice, mf.model) / static_cast<double>(N) + C;
    for (const Vec& qv : qs) {
      const ProbabilityVector q = prob_from(qv, "params.q");
      const double fn = scaled_product_entropy(q, gibbs);
      const double f = lyapunov_F(mf.model, q, C);
      std::vector<std::string> row = {std::to_string(N)};
      for (int i = 0; i < mf.space.d; ++i) row.push_back(csv::real(q[i]));
      row.insert(row.end(), {csv::real(fn), csv::real(f), csv::real(fn - f),
                             csv::real(logz_gap)});
      w.row(row);
      final_gap = fn - f;
    }
  }
  headline["C"] = C;
  headline["final_gap"] = final_gap;
}

void run_descent_check(const ExperimentConfig& cfg, Staged& out, json& headline) {
  const json& p = cfg.params;
  const auto rows = p["rate_matrix"];
  const int d = static_cast<int>(rows.size());
  Matrix G(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) G.at(r, c) = rows[r][c].get<double>();
  // accept matrices given without diagonals
  for (int r = 0; r < d; ++r) {
    double sum = 0.0;
    for (int c = 0; c < d; ++c)
      if (c != r) sum += G.at(r, c);
    G.at(r, r) = -sum;
  }
  validate_rate_matrix(G);

  const ProbabilityVector p0 = prob_from(p["p0"].get<Vec>(), "params.p0");
  const ProbabilityVector q0 = prob_from(p["q0"].get<Vec>(), "params.q0");
  const double horizon = p["horizon"].get<double>();
  const double step = p["step"].get<double>();

  const RateFamily family = RateFamily::constant(G);
  const Trajectory tp = solve_forward(family, p0, horizon, step);
  const Trajectory tq = solve_forward(family, q0, horizon, step);

  auto& os = out.open("descent.csv");
  csv::Writer w(os);
  w.comment("column t: grid time");
  w.comment("column re: relative_entropy(p(t), q(t)) along solve_forward");
  w.comment("column analytic_rate: entropy_descent_rate at (p(t), q(t))");
  w.comment("column fd_rate: centered finite difference of re over the grid");
  w.row({"t", "re", "analytic_rate", "fd_rate"});
  double max_dev = 0.0;
  bool monotone = true;
  double prev_re = relative_entropy(tp.points.front(), tq.points.front());
  for (std::size_t k = 0; k < tp.times.size(); ++k) {
    const double re = relative_entropy(tp.points[k], tq.points[k]);
    if (re > prev_re + 1e-9) monotone = false;
    prev_re = re;
    const double rate = entropy_descent_rate(tp.points[k], tq.points[k], G);
    std::string fd_cell = "";
    if (k > 0 && k + 1 < tp.times.size()) {
      const double fd = (relative_entropy(tp.points[k + 1], tq.points[k + 1]) -
                         relative_entropy(tp.points[k - 1], tq.points[k - 1])) /
                        (tp.times[k + 1] - tp.times[k - 1]);
      fd_cell = csv::real(fd);
      max_dev = std::max(max_dev, std::abs(fd - rate));
    }
    w.row({csv::real(tp.times[k]), csv::real(re), csv::real(rate), fd_cell});
  }
  headline["max_abs_dev_analytic_vs_fd"] = max_dev;
  headline["monotone_nonincreasing"] = monotone;
}

void run_jt(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
            json& headline) {
  const json& p = cfg.params;
  const ProbabilityVector q = prob_from(p["q"].get<Vec>(), "params.q");
  Vec times;
  get_vec(p["t"], times);
  std::vector<long long> ns;
  get_int_list(p["N"], ns);
  const int nodes = p.value("nodes", 64);
  const int restarts = p.value("restarts", 8);
  const std::string init_kind = p["init"].get<std::string>();
  const ProbabilityVector init_point =
      prob_from(p["init_point"].get<Vec>(), "params.init_point");

  const RateFamily limit = limit_rate_family(mf.model);
  const InitialCost j0 = (init_kind == "product")
                             ? InitialCost::relative_entropy_to(init_point)
                             : InitialCost::indicator(init_point);

  auto& os = out.open("jt.csv");
  csv::Writer w(os);
  w.comment("column t: time");
  w.comment("column jt: minimize_action value (path-space cost of reaching q)");
  w.comment(
      "column entropy_limit_extrapolated: scaled product entropies from the exact "
      "chain, least-squares extrapolated in 1/N");
  for (long long N : ns)
    w.comment("column entropy_N" + std::to_string(N) +
              ": (1/N) scaled product entropy at that N (entropy_curve)");
  {
    std::vector<std::string> header = {"t", "jt", "entropy_limit_extrapolated"};
    for (long long N : ns) header.push_back("entropy_N" + std::to_string(N));
    w.row(header);
  }

  // exact-chain curves per N
  std::vector<Vec> curves;
  for (long long N : ns) {
    const RateFamily family = prelimit_rate_family(mf.model, N);
    const LatticeGenerator gen = build_generator(family, N, cfg.lattice_cap);
    const LatticeDistribution init =
        (init_kind == "product") ? multinomial_pushforward(gen.lattice, init_point)
                                 : point_mass_nearest(gen.lattice, init_point);
    curves.push_back(entropy_curve(gen, q, init, times));
  }

  double last_jt = 0.0, last_ex = 0.0;
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const ActionResult action =
        minimize_action(limit, j0, q, times[ti], nodes, restarts, cfg.seed);
    Vec values;
    for (std::size_t i = 0; i < ns.size(); ++i) values.push_back(curves[i][ti]);
    const double extrapolated = extrapolate_in_1_over_n(ns, values);
    std::vector<std::string> row = {csv::real(times[ti]), csv::real(action.value),
                                    csv::real(extrapolated)};
    for (double v : values) row.push_back(csv::real(v));
    w.row(row);
    last_jt = action.value;
    last_ex = extrapolated;
  }
  headline["final_jt"] = last_jt;
  headline["final_extrapolated_entropy"] = last_ex;
  headline["final_abs_difference"] = std::abs(last_jt - last_ex);
}

void run_quasipotential(const ExperimentConfig& cfg, const ModelFile& mf, Staged& out,
                        json& headline) {
  const json& p = cfg.params;
  const ProbabilityVector q = prob_from(p["q"].get<Vec>(), "params.q");
  Vec horizons;
  get_vec(p["horizons"], horizons);
  const int nodes = p.value("nodes", 64);
  const int restarts = p.value("restarts", 4);

  const RateFamily limit = limit_rate_family(mf.model);
  ProbabilityVector pi_star = ProbabilityVector::uniform(mf.space.d);
  if (p.contains("pi_star")) {
    pi_star = prob_from(p["pi_star"].get<Vec>(), "params.pi_star");
  } else {
    const FixedPointSearch fps = find_fixed_points(limit, 16, 1e-10);
    if (fps.points.empty())
      throw std::runtime_error("quasipotential: no fixed point found");
    // nearest stable-looking candidate to the uniform measure by default
    pi_star = fps.points.front();
    double best = l1_distance(pi_star.span(), ProbabilityVector::uniform(mf.space.d).span());
    for (const auto& cand : fps.points) {
      const double dist =
          l1_distance(cand.span(), ProbabilityVector::uniform(mf.space.d).span());
      if (dist < best) {
        best = dist;
        pi_star = cand;
      }
    }
  }

  const QuasipotentialResult res =
      quasipotential(limit, pi_star, q, horizons, nodes, restarts, cfg.seed);

  auto& os = out.open("quasipotential.csv");
  csv::Writer w(os);
  w.comment("column horizon: path horizon");
  w.comment("column action: minimize_action value with the start pinned at pi_star");
  w.comment("column running_min: quasipotential upper bound so far");
  w.row({"horizon", "action", "running_min"});
  for (std::size_t i = 0; i < res.horizons.size(); ++i)
    w.row({csv::real(res.horizons[i]), csv::real(res.per_horizon[i]),
           csv::real(res.running_min[i])});

  auto& path_os = out.open("optimal_path.csv");
  csv::Writer pw(path_os);
  pw.comment("best path found by quasipotential (time, simplex point)");
  {
    std::vector<std::string> header = {"t"};
    for (int i = 0; i < mf.space.d; ++i) header.push_back("p_" + std::to_string(i + 1));
    pw.row(header);
  }
  for (std::size_t k = 0; k < res.best_path.times.size(); ++k) {
    std::vector<std::string> row = {csv::real(res.best_path.times[k])};
    for (int i = 0; i < mf.space.d; ++i)
      row.push_back(csv::real(res.best_path.points[k][i]));
    pw.row(row);
  }
  headline["pi_star"] = pi_star.weights();
  headline["quasipotential"] = res.value;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path,
                                        const RunOverrides& overrides) {
  const json doc = load_structured_file(path);
  ExperimentConfig cfg;
  cfg.config_path = path;
  if (doc.contains("kind") && doc["kind"].is_string())
    cfg.kind = doc["kind"].get<std::string>();
  if (doc.contains("model") && doc["model"].is_string())
    cfg.model_path = resolve_relative(path, doc["model"].get<std::string>());
  if (doc.contains("out_dir") && doc["out_dir"].is_string())
    cfg.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("seed") && doc["seed"].is_number_integer())
    cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("lattice_cap") && doc["lattice_cap"].is_number_integer())
    cfg.lattice_cap = doc["lattice_cap"].get<std::size_t>();
  if (doc.contains("params")) cfg.params = doc["params"];

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.lattice_cap) cfg.lattice_cap = *overrides.lattice_cap;
  return cfg;
}

Diagnostics validate_experiment(const std::string& path, const RunOverrides& overrides) {
  Diagnostics diag;
  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(path, overrides);
  } catch (const std::exception& e) {
    diag.add("(file)", e.what());
    return diag;
  }
  if (cfg.kind.empty()) {
    diag.add("kind", "missing experiment kind");
    return diag;
  }
  bool known = false;
  for (const auto& k : kKinds) known = known || k == cfg.kind;
  if (!known) {
    diag.add("kind", "unknown experiment kind '" + cfg.kind + "'");
    return diag;
  }

  int model_d = 0;
  if (kind_needs_model(cfg.kind)) {
    if (cfg.model_path.empty()) {
      diag.add("model", "missing model file reference");
    } else if (!fs::exists(cfg.model_path)) {
      diag.add("model", "referenced file does not exist: " + cfg.model_path);
    } else {
      try {
        const json mdoc = load_structured_file(cfg.model_path);
        Diagnostics mdiag;
        check_model_document(mdoc, mdiag);
        for (const auto& p : mdiag.problems) diag.add("model", p);
        if (mdiag.ok()) model_d = mdoc["d"].get<int>();
      } catch (const std::exception& e) {
        diag.add("model", e.what());
      }
    }
  }
  validate_params(cfg, model_d, diag);
  return diag;
}

int run_experiment(const std::string& path, const RunOverrides& overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  const Diagnostics diag = validate_experiment(path, overrides);
  if (!diag.ok()) {
    for (const auto& p : diag.problems) fprintf(stderr, "config error: %s\n", p.c_str());
    return 2;
  }
  ExperimentConfig cfg = load_experiment_config(path, overrides);
  if (overrides.threads) set_max_threads(*overrides.threads);

  Staged out;
  json headline;
  std::optional<ModelFile> mf;
  if (kind_needs_model(cfg.kind)) mf = load_model_file(cfg.model_path);

  if (cfg.kind == "ode") run_ode(cfg, *mf, out, headline);
  else if (cfg.kind == "simulate") run_simulate(cfg, *mf, out, headline);
  else if (cfg.kind == "stationary") run_stationary(cfg, *mf, out, headline);
  else if (cfg.kind == "entropy-limit") run_entropy_limit(cfg, *mf, out, headline);
  else if (cfg.kind == "descent-check") run_descent_check(cfg, out, headline);
  else if (cfg.kind == "jt") run_jt(cfg, *mf, out, headline);
  else if (cfg.kind == "quasipotential") run_quasipotential(cfg, *mf, out, headline);
  else return 2;

  out.finalize();
  const auto t1 = std::chrono::steady_clock::now();

  json summary;
  summary["experiment"] = cfg.kind;
  summary["config"] = cfg.config_path;
  summary["model"] = cfg.model_path;
  summary["params"] = cfg.params;
  summary["seed"] = cfg.seed;
  summary["lattice_cap"] = cfg.lattice_cap;
  summary["threads"] = max_threads();
  summary["version"] = kVersion;
  summary["wall_time_s"] =
      std::chrono::duration_cast<std::chrono::duration<double>>(t1 - t0).count();
  summary["finished_at_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  summary["headline"] = headline;
  summary["outputs"] = json::array();
  for (const auto& [name, _] : out.files) summary["outputs"].push_back(name);

  fs::create_directories(cfg.out_dir);
  for (const auto& [name, content] : out.files) {
    std::ofstream f(fs::path(cfg.out_dir) / name, std::ios::binary);
    f << content;
  }
  std::ofstream f(fs::path(cfg.out_dir) / "summary.json");
  f << summary.dump(2) << "\n";
  return 0;
}

}  // namespace mfre
