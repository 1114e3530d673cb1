// Copyright 2026 The inhomog Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "inhomog/acceptance.hpp"
#include "inhomog/bruteforce.hpp"
#include "inhomog/continued_fraction.hpp"
#include "inhomog/lattice_orbit.hpp"
#include "inhomog/metrical.hpp"
#include "inhomog/output.hpp"
#include "inhomog/symbolic.hpp"
#include "inhomog/transference.hpp"
#include "inhomog/version.hpp"

namespace {

using namespace inhomog;

struct GlobalOpts {
  std::string emit = "csv";       // csv | json | jsonl
  std::string out_path;           // empty = stdout
  long bits = 128;
  long max_bits = 8192;
  int threads = default_thread_count();
  std::uint64_t seed = 0;
};

PrecisionPolicy policy_of(const GlobalOpts& g) {
  PrecisionPolicy p;
  p.start_bits = g.bits;
  p.max_bits = g.max_bits;
  return p;
}

void write_out(const GlobalOpts& g, const RunMetadata& meta, const CsvTable& table,
               const Json& json_doc) {
  std::ostringstream buf;
  if (g.emit == "json") {
    Json doc;
    doc["meta"] = meta.to_json();
    doc.update(json_doc);
    buf << doc.dump(2) << "\n";
  } else if (g.emit == "jsonl") {
    Json m;
    m["meta"] = meta.to_json();
    buf << m.dump() << "\n";
    if (json_doc.contains("rows")) {
      for (const auto& r : json_doc["rows"]) buf << r.dump() << "\n";
    }
  } else {
    table.write(buf, meta);
  }
  if (g.out_path.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream os(g.out_path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + g.out_path);
    os << buf.str();
  }
}

std::string exponent_cell(const RealBall& err, const mpz_class& q) {
  mpz_class qa = abs(q);
  if (qa < 2 || !err.is_positive_certified()) return "";
  const double e = -std::log(err.center_double()) /
                   std::log(mpz_get_d(qa.get_mpz_t()));
  return fmt_double(e, 8);
}

int cmd_cf(const GlobalOpts& g, const std::string& xi_expr, long depth) {
  PrecisionPolicy pol = policy_of(g);
  SymValue xi = SymValue::parse(xi_expr);
  CFExpansion cf = expand(xi, depth, pol);
  RunMetadata meta;
  meta.command = "cf";
  meta.params["xi"] = xi_expr;
  meta.params["depth"] = std::to_string(depth);
  meta.params["terminated"] = cf.terminated ? "true" : "false";
  meta.params["truncated"] = cf.truncated ? "true" : "false";
  if (cf.trust_horizon >= 0) meta.params["trust_horizon"] = std::to_string(cf.trust_horizon);
  meta.prec_start = pol.start_bits;
  meta.prec_max = pol.max_bits;

  CsvTable table;
  table.header = {"k", "a_k", "p_k", "q_k", "residual", "residual_radius"};
  Json rows = Json::array();
  for (long k = 0; k <= cf.depth(); ++k) {
    RealBall res = abs_ball(convergent_residual(cf, k));
    table.rows.push_back({std::to_string(k), cf.a[k].get_str(), cf.p[k].get_str(),
                          cf.q[k].get_str(), fmt_ball_center(res), fmt_ball_radius(res)});
    Json r;
    r["k"] = k;
    r["a"] = cf.a[k].get_str();
    r["p"] = cf.p[k].get_str();
    r["q"] = cf.q[k].get_str();
    r["residual"] = fmt_ball_center(res);
    r["residual_radius"] = fmt_ball_radius(res);
    rows.push_back(r);
  }
  Json doc;
  doc["rows"] = rows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_construct(const GlobalOpts& g, const std::string& xi_expr, const std::string& y_expr,
                  long kmax, bool require_coprime) {
  PrecisionPolicy pol = policy_of(g);
  TargetProblem prob = TargetProblem::from_strings(xi_expr, y_expr);
  CFExpansion cf = expand(prob.xi, kmax + 1, pol);
  RunMetadata meta;
  meta.command = "construct";
  meta.params["xi"] = xi_expr;
  meta.params["y"] = y_expr;
  meta.params["kmax"] = std::to_string(kmax);
  meta.params["require_coprime"] = require_coprime ? "true" : "false";
  meta.prec_start = pol.start_bits;
  meta.prec_max = pol.max_bits;

  CsvTable table;
  table.header = {"k", "n_k", "n_k1", "p", "q", "error", "error_radius", "coprime",
                  "bound_case", "degenerate"};
  Json rows = Json::array();
  for (long k = 0; k <= kmax && k + 1 <= cf.depth(); ++k) {
    TransferenceStep step = build_candidates(cf, prob.y, k, pol);
    for (const auto& c : step.candidates) {
      if (require_coprime && (!c.coprime || c.degenerate)) continue;
      table.rows.push_back({std::to_string(k), c.n_k.get_str(), c.n_k1.get_str(), c.p.get_str(),
                            c.q.get_str(), fmt_ball_center(c.error), fmt_ball_radius(c.error),
                            c.coprime ? "1" : "0", to_string(c.bound_case),
                            c.degenerate ? "1" : "0"});
      Json r;
      r["k"] = k;
      r["n_k"] = c.n_k.get_str();
      r["n_k1"] = c.n_k1.get_str();
      r["p"] = c.p.get_str();
      r["q"] = c.q.get_str();
      r["error"] = fmt_ball_center(c.error);
      r["error_radius"] = fmt_ball_radius(c.error);
      r["coprime"] = c.coprime;
      r["bound_case"] = to_string(c.bound_case);
      r["degenerate"] = c.degenerate;
      rows.push_back(r);
    }
  }
  Json doc;
  doc["rows"] = rows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_theorem3(const GlobalOpts& g, const std::string& xi_expr, const std::string& y_expr,
                 long kmax) {
  PrecisionPolicy pol = policy_of(g);
  TargetProblem prob = TargetProblem::from_strings(xi_expr, y_expr);
  CFExpansion cf = expand(prob.xi, kmax + 1, pol);
  auto rows_data = prime_floor_scan(cf, prob.y, kmax, pol);
  RunMetadata meta;
  meta.command = "theorem3";
  meta.params["xi"] = xi_expr;
  meta.params["y"] = y_expr;
  meta.params["kmax"] = std::to_string(kmax);
  if (prob.y.is_rational() && !prob.y.is_decimal_literal())
    meta.params["note"] = "y is rational; prime-floor density for rational y is reported, not interpreted";
  meta.prec_start = pol.start_bits;
  meta.prec_max = pol.max_bits;

  CsvTable table;
  table.header = {"k", "floor_yqk", "is_prime", "is_unit", "coprimality_satisfied",
                  "n_solutions", "p", "q", "error"};
  Json rows = Json::array();
  for (const auto& row : rows_data) {
    const char* prime_s = row.primality == Primality::Prime
                              ? "1"
                              : (row.primality == Primality::ProbablePrime ? "probable" : "0");
    if (row.solutions.empty()) {
      table.rows.push_back({std::to_string(row.k), row.floor_yqk.get_str(), prime_s,
                            row.unit ? "1" : "0", row.coprimality_satisfied ? "1" : "0", "0", "",
                            "", ""});
    } else {
      for (const auto& s : row.solutions) {
        table.rows.push_back({std::to_string(row.k), row.floor_yqk.get_str(), prime_s,
                              row.unit ? "1" : "0", row.coprimality_satisfied ? "1" : "0",
                              std::to_string(row.solutions.size()), s.p.get_str(), s.q.get_str(),
                              fmt_ball_center(s.error)});
      }
    }
    Json r;
    r["k"] = row.k;
    r["floor_yqk"] = row.floor_yqk.get_str();
    r["is_prime"] = prime_s;
    r["is_unit"] = row.unit;
    r["coprimality_satisfied"] = row.coprimality_satisfied;
    Json sols = Json::array();
    for (const auto& s : row.solutions) {
      Json sj;
      sj["p"] = s.p.get_str();
      sj["q"] = s.q.get_str();
      sj["error"] = fmt_ball_center(s.error);
      sols.push_back(sj);
    }
    r["solutions"] = sols;
    rows.push_back(r);
  }
  Json doc;
  doc["rows"] = rows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_search(const GlobalOpts& g, const std::string& xi_expr, const std::string& y_expr,
               std::int64_t Q, bool coprime, const std::string& psi_spec, const std::string& sign) {
  TargetProblem prob = TargetProblem::from_strings(xi_expr, y_expr);
  SignFilter sf = sign == "negative" ? SignFilter::Negative
                                     : (sign == "both" ? SignFilter::Both : SignFilter::Positive);
  RunMetadata meta;
  meta.command = "search";
  meta.params["xi"] = xi_expr;
  meta.params["y"] = y_expr;
  meta.params["Q"] = std::to_string(Q);
  meta.params["coprime"] = coprime ? "true" : "false";
  meta.params["sign"] = sign;

  std::vector<SolutionRecord> rows;
  if (!psi_spec.empty()) {
    meta.params["psi"] = psi_spec;
    PsiSpec psi = PsiSpec::parse(psi_spec);
    if (!psi.non_increasing_over(std::min<std::int64_t>(Q, 100000)))
      throw std::invalid_argument("psi violates the non-increasing invariant over the working range");
    auto res = solutions_within(
        prob, Q,
        [&psi](std::int64_t q) {
          auto v = psi.eval_exact(static_cast<std::uint64_t>(q));
          if (v) return *v;
          // rational lower bound of the ball so only certified solutions pass
          RealBall b = psi.eval_ball(static_cast<std::uint64_t>(q));
          return mpq_class(std::max(0.0, b.center_double() - b.radius_double()));
        },
        coprime, sf);
    rows = std::move(res.rows);
  } else {
    auto res = best_solutions(prob, Q, coprime, sf);
    rows = std::move(res.rows);
  }

  CsvTable table;
  table.header = {"q", "p", "error", "error_radius", "effective_exponent", "coprime"};
  Json jrows = Json::array();
  for (const auto& r : rows) {
    table.rows.push_back({r.q.get_str(), r.p.get_str(), fmt_ball_center(r.error),
                          fmt_ball_radius(r.error), exponent_cell(r.error, r.q),
                          r.coprime ? "1" : "0"});
    Json j;
    j["q"] = r.q.get_str();
    j["p"] = r.p.get_str();
    j["error"] = fmt_ball_center(r.error);
    j["error_radius"] = fmt_ball_radius(r.error);
    j["coprime"] = r.coprime;
    jrows.push_back(j);
  }
  Json doc;
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_orbit(const GlobalOpts& g, const std::string& x_spec, const std::string& y_spec,
              std::int64_t T, const std::string& mu_spec) {
  Point x = Point::parse(x_spec);
  Point y = Point::parse(y_spec);
  mpq_class mu = [&] {
    SymValue v = SymValue::parse(mu_spec);
    if (!v.is_rational()) throw std::invalid_argument("--mu must be rational");
    return v.exact_rational();
  }();
  OrbitHits hits = orbit_hits(x, y, T, mu);
  RunMetadata meta;
  meta.command = "orbit";
  meta.params["x"] = x_spec;
  meta.params["y"] = y_spec;
  meta.params["T"] = std::to_string(T);
  meta.params["mu"] = mu_spec;

  CsvTable table;
  table.header = {"a", "b", "c", "d", "norm", "dist", "dist_radius", "status"};
  Json jrows = Json::array();
  auto add = [&](const HitRecord& h, const char* status) {
    table.rows.push_back({std::to_string(h.gamma.a), std::to_string(h.gamma.b),
                          std::to_string(h.gamma.c), std::to_string(h.gamma.d),
                          std::to_string(h.norm), fmt_ball_center(h.distance),
                          fmt_ball_radius(h.distance), status});
    Json j;
    j["a"] = h.gamma.a;
    j["b"] = h.gamma.b;
    j["c"] = h.gamma.c;
    j["d"] = h.gamma.d;
    j["norm"] = h.norm;
    j["dist"] = fmt_ball_center(h.distance);
    j["status"] = status;
    jrows.push_back(j);
  };
  for (const auto& h : hits.hits) add(h, "hit");
  for (const auto& h : hits.undecided) add(h, "undecided");
  Json doc;
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_count(const GlobalOpts& g, const std::string& x_spec, const std::string& annulus_spec,
              const std::string& t_list_spec) {
  Point x = Point::parse(x_spec);
  auto comma = annulus_spec.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--annulus expects 'a,b'");
  SymValue a = SymValue::parse(annulus_spec.substr(0, comma));
  SymValue b = SymValue::parse(annulus_spec.substr(comma + 1));
  if (!a.is_rational() || !b.is_rational())
    throw std::invalid_argument("--annulus bounds must be rational");
  Annulus omega(a.exact_rational(), b.exact_rational());
  std::vector<std::int64_t> T_list;
  {
    std::stringstream ss(t_list_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) T_list.push_back(std::stoll(tok));
    if (T_list.empty()) throw std::invalid_argument("--T-list expects 't1,t2,...'");
  }
  AnnulusCounts counts = count_in_annulus(x, omega, T_list, g.threads);
  RunMetadata meta;
  meta.command = "count";
  meta.params["x"] = x_spec;
  meta.params["annulus"] = annulus_spec;
  meta.params["T_list"] = t_list_spec;

  CsvTable table;
  table.header = {"T", "M", "M_over_T", "boundary_undecided"};
  Json jrows = Json::array();
  for (size_t i = 0; i < counts.T_values.size(); ++i) {
    const double ratio =
        static_cast<double>(counts.counts[i]) / static_cast<double>(counts.T_values[i]);
    table.rows.push_back({std::to_string(counts.T_values[i]), std::to_string(counts.counts[i]),
                          fmt_double(ratio, 10), std::to_string(counts.boundary_undecided[i])});
    Json j;
    j["T"] = counts.T_values[i];
    j["M"] = counts.counts[i];
    j["M_over_T"] = fmt_double(ratio, 10);
    j["boundary_undecided"] = counts.boundary_undecided[i];
    jrows.push_back(j);
  }
  Json doc;
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_exponent(const GlobalOpts& g, const std::string& x_spec, const std::string& y_spec,
                 std::int64_t T) {
  Point x = Point::parse(x_spec);
  Point y = Point::parse(y_spec);
  const double y1 = y.x1.eval(96).center_double();
  const double y2 = y.x2.eval(96).center_double();
  ExponentTargetResult res = density_exponent_estimate(x, y1, y2, T, g.threads);
  RunMetadata meta;
  meta.command = "exponent";
  meta.params["x"] = x_spec;
  meta.params["y"] = y_spec;
  meta.params["T"] = std::to_string(T);
  meta.params["mu_hat"] = res.mu_hat_defined ? fmt_double(res.mu_hat, 8) : "undefined";
  meta.params["exact_hits"] = std::to_string(res.exact_hits);

  CsvTable table;
  table.header = {"norm", "a", "b", "c", "d", "dist", "exponent"};
  Json jrows = Json::array();
  for (const auto& r : res.records) {
    table.rows.push_back({std::to_string(r.norm), std::to_string(r.gamma.a),
                          std::to_string(r.gamma.b), std::to_string(r.gamma.c),
                          std::to_string(r.gamma.d), fmt_double(r.dist), fmt_double(r.exponent, 8)});
    Json j;
    j["norm"] = r.norm;
    j["a"] = r.gamma.a;
    j["b"] = r.gamma.b;
    j["c"] = r.gamma.c;
    j["d"] = r.gamma.d;
    j["dist"] = fmt_double(r.dist);
    j["exponent"] = fmt_double(r.exponent, 8);
    jrows.push_back(j);
  }
  Json doc;
  doc["mu_hat"] = res.mu_hat_defined ? Json(fmt_double(res.mu_hat, 8)) : Json(nullptr);
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_measure(const GlobalOpts& g, const std::string& q_list, const std::string& psi_spec,
                std::uint64_t samples, std::uint64_t seed, const std::string& pair_spec) {
  PsiSpec psi = PsiSpec::parse(psi_spec);
  if (!psi.non_increasing_over(100000))
    throw std::invalid_argument("psi violates the non-increasing invariant over the working range");
  RunMetadata meta;
  meta.command = "measure";
  meta.params["psi"] = psi_spec;
  meta.params["samples"] = std::to_string(samples);
  meta.seed = seed;
  meta.params["psi_clamp"] = "min(psi,1/2)";

  CsvTable table;
  Json jrows = Json::array();
  if (!pair_spec.empty()) {
    auto comma = pair_spec.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--pair expects 'q,s'");
    const std::uint64_t q = std::stoull(pair_spec.substr(0, comma));
    const std::uint64_t s = std::stoull(pair_spec.substr(comma + 1));
    meta.params["pair"] = pair_spec;
    PairIntersection pi = pair_intersection_mc(q, s, psi, samples, seed, g.threads);
    table.header = {"q", "s", "coprime_estimate", "coprime_se", "unfiltered_estimate",
                    "unfiltered_se", "independence_value"};
    table.rows.push_back({std::to_string(q), std::to_string(s), fmt_double(pi.coprime.estimate),
                          fmt_double(pi.coprime.std_error), fmt_double(pi.unfiltered.estimate),
                          fmt_double(pi.unfiltered.std_error),
                          fmt_double(pi.independence_value)});
    Json j;
    j["q"] = q;
    j["s"] = s;
    j["coprime_estimate"] = fmt_double(pi.coprime.estimate);
    j["unfiltered_estimate"] = fmt_double(pi.unfiltered.estimate);
    j["independence_value"] = fmt_double(pi.independence_value);
    jrows.push_back(j);
  } else {
    table.header = {"q", "exact", "mc_estimate", "std_error", "hits", "samples"};
    std::stringstream ss(q_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const std::uint64_t q = std::stoull(tok);
      std::string exact_s;
      if (auto v = psi.eval_exact(q)) exact_s = strip_measure_exact(q, *v).get_str();
      McEstimate mc = strip_measure_mc(q, psi, samples, seed, g.threads);
      table.rows.push_back({std::to_string(q), exact_s, fmt_double(mc.estimate),
                            fmt_double(mc.std_error), std::to_string(mc.hits),
                            std::to_string(mc.samples)});
      Json j;
      j["q"] = q;
      j["exact"] = exact_s;
      j["mc_estimate"] = fmt_double(mc.estimate);
      j["std_error"] = fmt_double(mc.std_error);
      jrows.push_back(j);
    }
  }
  Json doc;
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_dichotomy(const GlobalOpts& g, const std::string& psi_spec, std::uint64_t points,
                  const std::string& windows, std::uint64_t seed) {
  PsiSpec psi = PsiSpec::parse(psi_spec);
  if (!psi.non_increasing_over(100000))
    throw std::invalid_argument("psi violates the non-increasing invariant over the working range");
  auto dots = windows.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("--windows expects 'j0..j1'");
  const int j0 = std::stoi(windows.substr(0, dots));
  const int j1 = std::stoi(windows.substr(dots + 2));
  auto rows = dichotomy_experiment(psi, points, j0, j1, seed, g.threads);
  RunMetadata meta;
  meta.command = "dichotomy";
  meta.params["psi"] = psi_spec;
  meta.params["points"] = std::to_string(points);
  meta.params["windows"] = windows;
  meta.params["series"] = psi.series_diverges() ? "divergent" : "convergent";
  meta.seed = seed;

  CsvTable table;
  table.header = {"j", "q_lo", "q_hi", "hits", "points", "fraction"};
  Json jrows = Json::array();
  for (const auto& r : rows) {
    table.rows.push_back({std::to_string(r.j), std::to_string(r.q_lo), std::to_string(r.q_hi),
                          std::to_string(r.hits), std::to_string(r.points),
                          fmt_double(r.fraction, 8)});
    Json j;
    j["j"] = r.j;
    j["q_lo"] = r.q_lo;
    j["q_hi"] = r.q_hi;
    j["hits"] = r.hits;
    j["fraction"] = fmt_double(r.fraction, 8);
    jrows.push_back(j);
  }
  Json doc;
  doc["rows"] = jrows;
  write_out(g, meta, table, doc);
  return 0;
}

int cmd_reproduce(const GlobalOpts& g, bool quick, int criterion, const std::string& out_dir) {
  AcceptanceConfig cfg;
  cfg.quick = quick;
  cfg.criterion = criterion;
  cfg.threads = g.threads;
  auto results = run_acceptance(cfg);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " ["
              << r.detail << "] (" << fmt_double(r.seconds, 3) << "s)\n";
    if (!r.pass) all_pass = false;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (const auto& r : results) {
      char name[64];
      std::snprintf(name, sizeof(name), "criterion_%02d.json", r.id);
      std::ofstream os(std::filesystem::path(out_dir) / name, std::ios::binary);
      Json doc;
      doc["id"] = r.id;
      doc["name"] = r.name;
      doc["pass"] = r.pass;
      doc["quick"] = quick;
      doc["result"] = Json::parse(r.artifact);
      os << doc.dump(2) << "\n";
    }
    Json summary;
    summary["tool"] = "inhomog";
    summary["version"] = kVersion;
    summary["quick"] = quick;
    Json list = Json::array();
    for (const auto& r : results) {
      Json e;
      e["id"] = r.id;
      e["pass"] = r.pass;
      list.push_back(e);
    }
    summary["criteria"] = list;
    std::ofstream os(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
    os << summary.dump(2) << "\n";
  }
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inhomog: experiments in inhomogeneous approximation with coprime integers"};
  app.set_version_flag("--version", inhomog::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env = std::getenv("INHOMOG_MAX_BITS")) g.max_bits = std::atol(env);
  app.add_option("--emit", g.emit, "output format: csv, json, jsonl")->capture_default_str();
  app.add_option("--out", g.out_path, "output file (default stdout)");
  app.add_option("--bits", g.bits, "starting precision in bits")->capture_default_str();
  app.add_option("--max-bits", g.max_bits, "precision escalation cap")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized runs")->capture_default_str();

  // cf
  std::string xi_expr, y_expr;
  long depth = 10;
  auto* cf = app.add_subcommand("cf", "continued fraction of xi with convergents")->fallthrough();
  cf->add_option("--xi", xi_expr, "expression, e.g. sqrt(2), golden, e, 0.7234")->required();
  cf->add_option("--depth", depth, "expansion depth K")->capture_default_str();

  // construct
  long kmax = 10;
  bool require_coprime = false;
  auto* construct = app.add_subcommand("construct", "two-convergent candidate solutions")->fallthrough();
  construct->add_option("--xi", xi_expr)->required();
  construct->add_option("--y", y_expr)->required();
  construct->add_option("--kmax", kmax)->capture_default_str();
  construct->add_flag("--require-coprime", require_coprime, "emit only coprime candidates");

  // theorem3
  auto* th3 = app.add_subcommand("theorem3", "prime floor(y q_k) scan with coprime solutions")->fallthrough();
  th3->add_option("--xi", xi_expr)->required();
  th3->add_option("--y", y_expr)->required();
  th3->add_option("--kmax", kmax)->capture_default_str();

  // search
  std::int64_t Q = 1000;
  bool coprime = false;
  std::string psi_spec, sign = "positive";
  auto* search = app.add_subcommand("search", "exhaustive best approximations up to height Q")->fallthrough();
  search->add_option("--xi", xi_expr)->required();
  search->add_option("--y", y_expr)->required();
  search->add_option("--Q", Q)->required();
  search->add_flag("--coprime", coprime, "restrict to coprime pairs");
  search->add_option("--psi", psi_spec, "filter to |q xi + p - y| <= psi(q), psi = 'c,alpha,beta'");
  search->add_option("--sign", sign, "positive, negative or both")->capture_default_str();

  // orbit
  std::string x_spec, ypt_spec, mu_spec = "1/2";
  std::int64_t T = 1000;
  auto* orbit = app.add_subcommand("orbit", "lattice-orbit hits |gamma x - y| <= norm^-mu")->fallthrough();
  orbit->add_option("--x", x_spec, "point 'expr,expr'")->required();
  orbit->add_option("--y", ypt_spec, "target 'expr,expr'")->required();
  orbit->add_option("--T", T)->capture_default_str();
  orbit->add_option("--mu", mu_spec)->capture_default_str();

  // count
  std::string annulus_spec = "1,2", t_list_spec = "250,500,1000";
  auto* count = app.add_subcommand("count", "orbit points inside a sup-norm annulus")->fallthrough();
  count->add_option("--x", x_spec)->required();
  count->add_option("--annulus", annulus_spec, "'a,b' rational bounds")->capture_default_str();
  count->add_option("--T-list", t_list_spec, "comma-separated norms")->capture_default_str();

  // exponent
  auto* exponent = app.add_subcommand("exponent", "density exponent estimate for one target")->fallthrough();
  exponent->add_option("--x", x_spec)->required();
  exponent->add_option("--y", ypt_spec)->required();
  exponent->add_option("--T", T)->capture_default_str();

  // measure
  std::string q_list = "1,2,3", pair_spec;
  std::uint64_t samples = 100000, seed_opt = 1;
  auto* measure = app.add_subcommand("measure", "strip-measure Monte Carlo vs the exact value")->fallthrough();
  measure->add_option("--q", q_list, "comma-separated q values")->capture_default_str();
  measure->add_option("--psi", psi_spec, "'c,alpha,beta'")->required();
  measure->add_option("--samples", samples)->capture_default_str();
  measure->add_option("--seed", seed_opt)->capture_default_str();
  measure->add_option("--pair", pair_spec, "intersection mode: 'q,s'");

  // dichotomy
  std::string windows = "4..14";
  std::uint64_t points = 10000;
  auto* dichotomy = app.add_subcommand("dichotomy", "windowed solvability fractions")->fallthrough();
  dichotomy->add_option("--psi", psi_spec, "'c,alpha,beta'")->required();
  dichotomy->add_option("--points", points)->capture_default_str();
  dichotomy->add_option("--windows", windows)->capture_default_str();
  dichotomy->add_option("--seed", seed_opt)->capture_default_str();

  // reproduce
  bool quick = false;
  int criterion = 0;
  std::string out_dir;
  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance suite")->fallthrough();
  reproduce->add_flag("--quick", quick, "reduced sample sizes (smoke mode)");
  reproduce->add_option("--criterion", criterion, "run a single criterion 1..15");
  reproduce->add_option("--out", out_dir, "directory for per-criterion artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cf->parsed()) return cmd_cf(g, xi_expr, depth);
    if (construct->parsed()) return cmd_construct(g, xi_expr, y_expr, kmax, require_coprime);
    if (th3->parsed()) return cmd_theorem3(g, xi_expr, y_expr, kmax);
    if (search->parsed()) return cmd_search(g, xi_expr, y_expr, Q, coprime, psi_spec, sign);
    if (orbit->parsed()) return cmd_orbit(g, x_spec, ypt_spec, T, mu_spec);
    if (count->parsed()) return cmd_count(g, x_spec, annulus_spec, t_list_spec);
    if (exponent->parsed()) return cmd_exponent(g, x_spec, ypt_spec, T);
    if (measure->parsed()) return cmd_measure(g, q_list, psi_spec, samples, seed_opt, pair_spec);
    if (dichotomy->parsed()) return cmd_dichotomy(g, psi_spec, points, windows, seed_opt);
    if (reproduce->parsed()) return cmd_reproduce(g, quick, criterion, out_dir);
  } catch (const inhomog::PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
