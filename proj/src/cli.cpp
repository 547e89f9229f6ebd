#include "convexlab/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "convexlab/approximation.hpp"
#include "convexlab/convexity.hpp"
#include "convexlab/galerkin.hpp"
#include "convexlab/hahn_banach.hpp"
#include "convexlab/weak.hpp"

namespace convexlab::cli {

// ---------------------------------------------------------------------------
// NormSpec <-> JSON

namespace {

void spec_violations(const json& j, const std::string& where, std::vector<std::string>& out) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    out.push_back(where + ": needs a string \"kind\" (lp, inner or sum)");
    return;
  }
  const std::string kind = j["kind"];
  if (kind == "lp") {
    if (!j.contains("p")) {
      out.push_back(where + ".p: missing");
    } else if (j["p"].is_string()) {
      if (j["p"] != "inf") out.push_back(where + ".p: lp p must lie in [1, inf]");
    } else if (!j["p"].is_number() || !(j["p"].get<double>() >= 1.0)) {
      out.push_back(where + ".p: lp p must lie in [1, inf]");
    }
  } else if (kind == "inner") {
    const json& g = j.value("gram", json());
    bool ok = g.is_array() && !g.empty();
    for (const auto& row : g) ok = ok && row.is_array() && row.size() == g.size();
    for (const auto& row : g) {
      for (const auto& v : row) ok = ok && v.is_number();
    }
    if (!ok) {
      out.push_back(where + ".gram: must be a square numeric matrix");
      return;
    }
    try {
      spec_from_json(j);
    } catch (const std::exception& e) {
      out.push_back(where + ".gram: " + e.what());
    }
  } else if (kind == "sum") {
    const json& parts = j.value("parts", json());
    if (!parts.is_array() || parts.empty()) {
      out.push_back(where + ".parts: must be a nonempty list of specs");
      return;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      spec_violations(parts[i], where + ".parts[" + std::to_string(i) + "]", out);
    }
  } else {
    out.push_back(where + ".kind: unknown kind \"" + kind + "\"");
  }
}

}  // namespace

NormSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("spec needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    const json& p = j.at("p");
    if (p.is_string()) {
      if (p != "inf") throw DomainError("lp p must lie in [1, inf]");
      return NormSpec::lp(kInf);
    }
    return NormSpec::lp(p.get<double>());
  }
  if (kind == "inner") {
    const json& g = j.at("gram");
    const auto n = static_cast<Eigen::Index>(g.size());
    Matrix G(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (g[r].size() != g.size()) throw DomainError("gram must be square");
      for (Eigen::Index c = 0; c < n; ++c) G(r, c) = g[r][c].get<double>();
    }
    return NormSpec::inner(std::move(G));
  }
  if (kind == "sum") {
    std::vector<NormSpec> parts;
    for (const auto& part : j.at("parts")) parts.push_back(spec_from_json(part));
    return NormSpec::sum(std::move(parts));
  }
  throw DomainError("unknown spec kind: " + kind);
}

json spec_to_json(const NormSpec& spec) {
  if (auto* lp = spec.as_lp()) {
    return std::isinf(lp->p) ? json{{"kind", "lp"}, {"p", "inf"}} : json{{"kind", "lp"}, {"p", lp->p}};
  }
  if (auto* ip = spec.as_inner()) {
    json g = json::array();
    for (Eigen::Index r = 0; r < ip->gram.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < ip->gram.cols(); ++c) row.push_back(ip->gram(r, c));
      g.push_back(row);
    }
    return {{"kind", "inner"}, {"gram", g}};
  }
  json parts = json::array();
  for (const auto& p : spec.as_sum()->parts) parts.push_back(spec_to_json(p));
  return {{"kind", "sum"}, {"parts", parts}};
}

// ---------------------------------------------------------------------------
// Config schema

namespace {

const std::vector<std::string> kCommands = {"ball",    "modulus", "strict",   "extension",
                                            "nearest", "weak",    "galerkin", "l1l2"};

const std::map<std::string, std::vector<std::string>> kKeys = {
    {"ball", {"spec", "out", "k"}},
    {"modulus", {"spec", "seed", "out", "grid", "dim", "budget"}},
    {"strict", {"spec", "seed", "out", "dim", "trials"}},
    {"extension", {"spec", "seed", "out", "tol", "basis", "values", "directions"}},
    {"nearest", {"spec", "seed", "out", "tol", "f", "basis"}},
    {"weak", {"spec", "seed", "out", "tol", "family", "base", "candidate", "nmax"}},
    {"galerkin", {"out", "n", "samples", "load", "quadrature", "solution_out"}},
    {"l1l2", {"out", "N"}},
};

bool is_vector(const json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& x : v) {
    if (!x.is_number()) return false;
  }
  return true;
}

bool is_int_at_least(const json& v, long long lo) {
  return v.is_number_integer() && v.get<long long>() >= lo;
}

// "a:b:step", a list, or a single number.
std::optional<std::vector<double>> parse_grid(const json& g) {
  std::vector<double> out;
  if (g.is_number()) return std::vector<double>{g.get<double>()};
  if (is_vector(g)) {
    for (const auto& x : g) out.push_back(x.get<double>());
    return out;
  }
  if (!g.is_string()) return std::nullopt;
  const std::string s = g;
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
    return std::nullopt;
  }
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) return std::nullopt;
  for (long long i = 0; i < count; ++i) {
    out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

std::vector<std::size_t> size_list(const json& v) {
  std::vector<std::size_t> out;
  if (v.is_number_integer()) out.push_back(v.get<std::size_t>());
  else for (const auto& x : v) out.push_back(x.get<std::size_t>());
  return out;
}

bool is_size_list(const json& v, long long lo) {
  if (is_int_at_least(v, lo)) return true;
  if (!v.is_array() || v.empty()) return false;
  for (const auto& x : v) {
    if (!is_int_at_least(x, lo)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> validate_config(const json& cfg) {
  std::vector<std::string> v;
  if (!cfg.is_object()) return {"config: must be a JSON object"};
  const std::string cmd = cfg.value("command", "");
  const auto keys = kKeys.find(cmd);
  if (keys == kKeys.end()) return {"command: unknown command \"" + cmd + "\""};
  const std::set<std::string> allowed(keys->second.begin(), keys->second.end());
  for (const auto& [k, val] : cfg.items()) {
    if (k != "command" && !allowed.count(k)) v.push_back(k + ": not a parameter of " + cmd);
  }
  auto has = [&](const char* k) { return cfg.contains(k); };

  if (has("spec")) spec_violations(cfg["spec"], "spec", v);
  if (has("seed") && !is_int_at_least(cfg["seed"], 0)) v.push_back("seed: must be a nonnegative integer");
  if (has("out") && (!cfg["out"].is_string() || cfg["out"].get<std::string>().empty())) {
    v.push_back("out: must be a nonempty path");
  }
  if (has("tol") && !(cfg["tol"].is_number() && cfg["tol"].get<double>() > 0.0)) {
    v.push_back("tol: must be a positive number");
  }

  if (cmd == "ball" && has("k") && !is_int_at_least(cfg["k"], 8)) v.push_back("k: must be an integer >= 8");
  if (cmd == "modulus") {
    if (has("grid")) {
      const auto g = parse_grid(cfg["grid"]);
      if (!g || g->empty()) {
        v.push_back("grid: expected a list, a number or \"start:stop:step\"");
      } else {
        for (std::size_t i = 0; i < g->size(); ++i) {
          if (!((*g)[i] > 0.0 && (*g)[i] <= 2.0)) {
            v.push_back("grid: eps must lie in (0,2]");
            break;
          }
          if (i && !((*g)[i] > (*g)[i - 1])) {
            v.push_back("grid: must be ascending");
            break;
          }
        }
      }
    }
    if (has("budget") && !is_int_at_least(cfg["budget"], 1000)) v.push_back("budget: must be an integer >= 1000");
  }
  if ((cmd == "modulus" || cmd == "strict") && has("dim") && !is_int_at_least(cfg["dim"], 1)) {
    v.push_back("dim: must be a positive integer");
  }
  if (cmd == "strict" && has("trials") && !is_int_at_least(cfg["trials"], 1)) {
    v.push_back("trials: must be a positive integer");
  }
  if (cmd == "extension" || cmd == "nearest") {
    std::size_t n = 0;
    if (!has("basis")) {
      v.push_back("basis: missing (list of basis vectors)");
    } else {
      const json& b = cfg["basis"];
      bool ok = b.is_array() && !b.empty();
      if (ok) n = b[0].size();
      for (const auto& col : b) ok = ok && is_vector(col) && col.size() == n;
      if (!ok) v.push_back("basis: must be a nonempty list of equal-length numeric vectors");
    }
    if (cmd == "extension") {
      if (!has("values")) v.push_back("values: missing");
      else if (!is_vector(cfg["values"])) v.push_back("values: must be a numeric list");
      else if (has("basis") && cfg["basis"].is_array() && cfg["values"].size() != cfg["basis"].size()) {
        v.push_back("values: need one value per basis vector");
      }
      if (has("directions") && !is_int_at_least(cfg["directions"], 1)) {
        v.push_back("directions: must be a positive integer");
      }
    } else {
      if (!has("f")) v.push_back("f: missing");
      else if (!is_vector(cfg["f"])) v.push_back("f: must be a numeric list");
      else if (n && cfg["f"].size() != n) v.push_back("f: length must match the basis vectors");
    }
  }
  if (cmd == "weak") {
    if (has("family")) {
      const json& f = cfg["family"];
      if (!f.is_string() || (f != "unit" && f != "tail" && f != "spike")) {
        v.push_back("family: must be one of unit, tail, spike");
      }
    }
    for (const char* k : {"base", "candidate"}) {
      if (has(k) && !(cfg[k].is_array() && (cfg[k].empty() || is_vector(cfg[k])))) {
        v.push_back(std::string(k) + ": must be a numeric list");
      }
    }
    if (has("nmax") && !is_int_at_least(cfg["nmax"], 8)) v.push_back("nmax: must be an integer >= 8");
    if (has("spec") && v.empty()) {
      const NormSpec s = spec_from_json(cfg["spec"]);
      if (!s.acts_on_sequences()) v.push_back("spec: weak experiments need an lp or sum-of-lp spec");
    }
  }
  if (cmd == "galerkin") {
    if (has("n") && !is_size_list(cfg["n"], 2)) v.push_back("n: mesh sizes must be integers >= 2");
    if (has("samples") && !is_int_at_least(cfg["samples"], 2)) v.push_back("samples: must be an integer >= 2");
    if (has("load") && (!cfg["load"].is_string() || (cfg["load"] != "sin" && cfg["load"] != "one"))) {
      v.push_back("load: must be \"sin\" or \"one\"");
    }
    if (has("quadrature") && !(is_int_at_least(cfg["quadrature"], 1) && cfg["quadrature"].get<int>() <= 5)) {
      v.push_back("quadrature: must be an integer in 1..5");
    }
    if (has("solution_out") && !cfg["solution_out"].is_string()) v.push_back("solution_out: must be a path");
  }
  if (cmd == "l1l2" && has("N") && !is_size_list(cfg["N"], 1)) v.push_back("N: must be a positive integer or a list");
  return v;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Output {
  std::string csv;
  json meta = json::object();
  std::string summary;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

Vector to_vector(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json from_vector(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Matrix columns(const json& cols) {
  Matrix B(static_cast<Eigen::Index>(cols[0].size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) B.col(static_cast<Eigen::Index>(c)) = to_vector(cols[c]);
  return B;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  return s + '\n';
}

Output cmd_ball(const json& cfg, const NormSpec& spec) {
  const auto k = cfg.value("k", 256);
  Output o;
  o.csv = "x,y,norm\n";
  for (const auto& p : sphere_sample_2d(spec, static_cast<std::size_t>(k))) {
    o.csv += csv_row({fmt9(p[0]), fmt9(p[1]), fmt9(norm_eval(p, spec))});
  }
  o.meta["points"] = k;
  o.summary = "ball: " + std::to_string(k) + " unit-sphere points of " + spec.label();
  return o;
}

Output cmd_modulus(const json& cfg, const NormSpec& spec) {
  const auto grid = *parse_grid(cfg.value("grid", json("0.1:1.9:0.1")));
  const auto dim = cfg.value("dim", std::size_t{2});
  const auto budget = cfg.value("budget", std::uint64_t{20000});
  const auto seed = cfg.value("seed", std::uint64_t{0});
  const auto curve = modulus_curve(spec, dim, grid, budget, seed);
  Output o;
  o.csv = curve.to_csv();
  bool flat = false;
  for (double s : curve.sup_midpoint) flat = flat || s >= 1.0 - 1e-6;
  o.meta["dim"] = dim;
  o.meta["budget"] = budget;
  o.meta["uniformly_convex"] = flat ? "violated" : "pass";
  o.meta["evidence"] = flat ? "witness" : "empirical";
  o.summary = "modulus: " + std::to_string(grid.size()) + " eps values, uniform convexity " +
              (flat ? "violated" : "not refuted (empirical)");
  return o;
}

Output cmd_strict(const json& cfg, const NormSpec& spec) {
  const auto dim = cfg.value("dim", std::size_t{3});
  const auto trials = cfg.value("trials", std::uint64_t{10000});
  const auto seed = cfg.value("seed", std::uint64_t{0});
  const auto v = strict_convexity_probe(spec, dim, trials, seed);
  Output o;
  o.csv = "verdict,x,y,midpoint_norm\n";
  o.csv += csv_row({v.violated ? "violated" : "pass", join_vector(v.x), join_vector(v.y),
                    v.violated ? fmt9(v.midpoint_norm) : ""});
  o.meta["dim"] = dim;
  o.meta["trials"] = trials;
  o.meta["strictly_convex"] = v.violated ? "violated" : "pass";
  o.meta["evidence"] = v.violated ? "witness" : "empirical";
  o.summary = "strict: " + std::string(v.violated ? "violated at x=" + join_vector(v.x) + " y=" + join_vector(v.y)
                                                  : "no flat segment found");
  return o;
}

Output cmd_extension(const json& cfg, const NormSpec& spec) {
  const Subspace U(columns(cfg["basis"]));
  const Vector f = to_vector(cfg["values"]);
  const double tol = cfg.value("tol", kDefaultTol);
  const auto n = static_cast<std::size_t>(U.ambient_dim());
  const auto dirs = cfg.value("directions", 2 * n + 4);
  const auto seed = cfg.value("seed", std::uint64_t{0});
  const double fnorm = functional_norm_on_subspace(U, f, spec, tol);
  const Extension best = min_norm_extension(U, f, spec, tol);
  const auto probe = extension_uniqueness_probe(U, f, spec, std::max(dirs, 2 * n), tol, seed);
  Output o;
  o.csv = "id,coeffs,dual_norm\n";
  o.csv += csv_row({"min_norm", join_vector(best.coeffs), fmt9(best.dual_norm_value)});
  for (std::size_t i = 0; i < probe.witnesses.size(); ++i) {
    o.csv += csv_row({"witness" + std::to_string(i + 1), join_vector(probe.witnesses[i].coeffs),
                      fmt9(probe.witnesses[i].dual_norm_value)});
  }
  const bool unique = probe.diameter <= 10.0 * tol;
  o.meta["tol"] = tol;
  o.meta["functional_norm"] = fnorm;
  o.meta["extension"] = json::parse(best.to_json());
  o.meta["diameter"] = probe.diameter;
  o.meta["unique"] = unique;
  o.meta["witnesses"] = json::array();
  for (const auto& w : probe.witnesses) o.meta["witnesses"].push_back(json::parse(w.to_json()));
  if (!unique) {
    o.meta["farthest_pair"] = {probe.far_a + 1, probe.far_b + 1};
    o.meta["midpoint_dual_norm"] = probe.midpoint_dual_norm;
  }
  o.summary = "extension: norm " + fmt9(best.dual_norm_value) + " (on subspace " + fmt9(fnorm) + "), " +
              (unique ? "unique" : "not unique, diameter " + fmt9(probe.diameter));
  return o;
}

Output cmd_nearest(const json& cfg, const NormSpec& spec) {
  const Subspace Y(columns(cfg["basis"]));
  const Vector f = to_vector(cfg["f"]);
  const double tol = cfg.value("tol", kDefaultTol);
  const auto seed = cfg.value("seed", std::uint64_t{0});
  const auto v = nearest_point_uniqueness_check(f, Y, spec, tol, seed);
  Output o;
  o.csv = approximation_csv_header() + approximation_csv_row(spec, v.result);
  o.meta["tol"] = tol;
  o.meta["distance"] = v.result.distance;
  o.meta["diameter"] = v.result.uniqueness_diameter;
  o.meta["unique"] = v.unique;
  if (!v.unique) {
    o.meta["witnesses"] = {from_vector(v.g), from_vector(v.h)};
    o.meta["midpoint_distance"] = v.midpoint_distance;
    o.meta["inconsistent"] = v.inconsistent;
  }
  o.summary = "nearest: distance " + fmt9(v.result.distance) + ", " +
              (v.unique ? "unique minimizer" : "not unique: " + join_vector(v.g) + " and " + join_vector(v.h));
  return o;
}

SparseSeq dense_seq(const json& j) {
  return j.empty() ? SparseSeq() : SparseSeq::from_dense(to_vector(j));
}

Output cmd_weak(const json& cfg, const NormSpec& spec) {
  const std::string family = cfg.value("family", "tail");
  const auto nmax = cfg.value("nmax", std::size_t{200});
  const double tol = cfg.value("tol", 1e-12);
  const auto seed = cfg.value("seed", std::uint64_t{0});
  const SparseSeq base = dense_seq(cfg.value("base", json::array({1.0})));
  SequenceFamily fam = family == "unit"   ? SequenceFamily::unit_vectors(nmax)
                       : family == "tail" ? SequenceFamily::decaying_tail(base, 1.0, nmax)
                                          : SequenceFamily::moving_spike(base, nmax);
  const SparseSeq cand = cfg.contains("candidate") ? dense_seq(cfg["candidate"])
                                                   : (family == "unit" ? SparseSeq() : base);
  double q = 2.0;
  if (auto* lp = spec.as_lp()) q = conjugate_exponent(lp->p);
  const auto funcs = FunctionalFamily::standard(q, seed);
  const auto rr = riesz_radon_check(fam, funcs, cand, spec, tol, nmax);
  Output o;
  o.csv = trace_csv(fam, funcs, cand, spec, nmax);
  o.meta["tol"] = tol;
  o.meta["family"] = fam.name;
  o.meta["functionals"] = funcs.label();
  o.meta["weak_limit"] = rr.weak.pass ? "pass" : "fail";
  o.meta["settle_index"] = rr.weak.settle_index;
  o.meta["worst_functional"] = funcs.ids[rr.weak.worst_functional];
  o.meta["norms_converge"] = rr.norms_converge;
  o.meta["distance_converges"] = rr.distance_converges;
  o.meta["upgrade"] = to_string(rr.status);
  o.meta["doubling_ratios"] = rr.doubling_ratios;
  o.summary = "weak: " + fam.name + " weak limit " + (rr.weak.pass ? "pass" : "fail") + ", upgrade " +
              to_string(rr.status) + ", final distance " + fmt9(rr.rows.back().distance);
  return o;
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? out.substr(0, dot) : out) + suffix;
}

Output cmd_galerkin(const json& cfg) {
  const auto sizes = size_list(cfg.value("n", json::array({16, 32, 64, 128})));
  const auto samples = cfg.value("samples", std::size_t{101});
  const std::string load = cfg.value("load", "sin");
  const int quad = cfg.value("quadrature", 3);
  const double pi = std::acos(-1.0);
  galerkin::Function f, u, du;
  if (load == "sin") {
    f = [pi](double x) { return (1.0 + pi * pi) * std::sin(pi * x); };
    u = [pi](double x) { return std::sin(pi * x); };
    du = [pi](double x) { return pi * std::cos(pi * x); };
  } else {
    const double c = std::cosh(0.5);
    f = [](double) { return 1.0; };
    u = [c](double x) { return 1.0 - std::cosh(x - 0.5) / c; };
    du = [c](double x) { return -std::sinh(x - 0.5) / c; };
  }
  std::vector<galerkin::ErrorRow> rows;
  double worst_residual = 0.0;
  std::optional<galerkin::Solution> finest;
  for (std::size_t n : sizes) {
    const galerkin::Problem p{galerkin::Mesh(n), f, quad};
    auto sol = galerkin::solve(p);
    worst_residual = std::max(worst_residual, galerkin::weak_residual(sol, p));
    galerkin::ErrorRow r{n, galerkin::energy_error(sol, u, du), 1.0, 0.0};
    r.nodal_error = galerkin::star_norm(sol.mesh, Vector(galerkin::interpolate(sol.mesh, u) - sol.nodal()));
    if (!rows.empty()) r.ratio = r.error / rows.back().error;
    rows.push_back(r);
    finest = std::move(sol);
  }
  Output o;
  o.csv = galerkin::error_table_csv(rows);
  const std::string sol_path =
      cfg.value("solution_out", sibling_path(cfg.value("out", std::string("galerkin.csv")), "_solution.csv"));
  o.extra_files.emplace_back(sol_path, galerkin::solution_csv(*finest, samples));
  o.meta["load"] = load;
  o.meta["quadrature"] = quad;
  o.meta["max_weak_residual"] = worst_residual;
  o.meta["solution_csv"] = sol_path;
  o.summary = "galerkin: " + std::to_string(rows.size()) + " meshes, finest error " + fmt9(rows.back().error) +
              ", last ratio " + fmt9(rows.back().ratio);
  return o;
}

Output cmd_l1l2(const json& cfg) {
  const auto ns = size_list(cfg.value("N", json(8)));
  Output o;
  o.csv = "N,norm_x,norm_y,norm_diff,norm_mid,mid_ratio,sep_ratio\n";
  for (std::size_t n : ns) {
    const auto p = l1l2_pair(n);
    o.csv += csv_row({std::to_string(n), fmt9(p.norm_x), fmt9(p.norm_y), fmt9(p.norm_diff), fmt9(p.norm_mid),
                      fmt9(p.mid_ratio), fmt9(p.sep_ratio)});
  }
  const auto last = l1l2_pair(ns.back());
  o.meta["spec"] = spec_to_json(NormSpec::sum({NormSpec::lp(1.0), NormSpec::lp(2.0)}));
  o.meta["last_mid_ratio"] = last.mid_ratio;
  o.meta["last_sep_ratio"] = last.sep_ratio;
  o.summary = "l1l2: N=" + std::to_string(ns.back()) + " midpoint ratio " + fmt9(last.mid_ratio) +
              ", separation ratio " + fmt9(last.sep_ratio);
  return o;
}

Output dispatch(const json& cfg) {
  const std::string cmd = cfg["command"];
  if (cmd == "galerkin") return cmd_galerkin(cfg);
  if (cmd == "l1l2") return cmd_l1l2(cfg);
  const NormSpec spec = spec_from_json(cfg.value("spec", json{{"kind", "lp"}, {"p", 2}}));
  if (cmd == "ball") return cmd_ball(cfg, spec);
  if (cmd == "modulus") return cmd_modulus(cfg, spec);
  if (cmd == "strict") return cmd_strict(cfg, spec);
  if (cmd == "extension") return cmd_extension(cfg, spec);
  if (cmd == "nearest") return cmd_nearest(cfg, spec);
  return cmd_weak(cfg, spec);
}

json flag_value(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error&) {
    return s;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"convexlab: normed-space convexity experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> configs;
  for (const auto& cmd : kCommands) {
    auto* sc = app.add_subcommand(cmd);
    sc->add_option("--config", configs[cmd], "JSON config file; flags override it");
    for (const auto& key : kKeys.at(cmd)) {
      sc->add_option("--" + key, flags[cmd][key]);
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "convexlab: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  json cfg = json::object();
  auto* sc = app.get_subcommand(cmd);
  if (sc->count("--config")) {
    std::ifstream in(configs[cmd]);
    if (!in) {
      err << "convexlab: cannot read config " << configs[cmd] << '\n';
      return kConfigError;
    }
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      err << "convexlab: config is not valid JSON: " << e.what() << '\n';
      return kConfigError;
    }
    if (!cfg.is_object()) {
      err << "convexlab: config must be a JSON object\n";
      return kConfigError;
    }
    if (cfg.contains("command") && cfg["command"] != cmd) {
      err << "convexlab: config is for command " << cfg["command"].dump() << ", not " << cmd << '\n';
      return kConfigError;
    }
    // Parameters may be flat or grouped under "params".
    if (cfg.contains("params") && cfg["params"].is_object()) {
      for (const auto& [k, v] : cfg["params"].items()) {
        if (!cfg.contains(k)) cfg[k] = v;
      }
      cfg.erase("params");
    }
  }
  for (const auto& key : kKeys.at(cmd)) {
    if (sc->count("--" + key)) cfg[key] = flag_value(flags[cmd][key]);
  }
  cfg["command"] = cmd;
  for (const char* k : {"out", "solution_out"}) {
    // A bare path would otherwise parse as a JSON number or literal.
    if (cfg.contains(k) && !cfg[k].is_string()) cfg[k] = cfg[k].dump();
  }

  const auto problems = validate_config(cfg);
  if (!problems.empty()) {
    for (const auto& p : problems) err << "convexlab: " << p << '\n';
    return kConfigError;
  }

  const std::string out_path = cfg.value("out", cmd + ".csv");
  std::ofstream csv(out_path, std::ios::binary);
  std::ofstream meta(out_path + ".json", std::ios::binary);
  if (!csv || !meta) {
    err << "convexlab: cannot write " << out_path << '\n';
    return kUnwritable;
  }

  Output o;
  try {
    o = dispatch(cfg);
  } catch (const ConvergenceError& e) {
    err << "convexlab: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::invalid_argument& e) {
    err << "convexlab: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "convexlab: " << e.what() << '\n';
    return kConfigError;
  }

  json m = {{"command", cmd}, {"seed", cfg.value("seed", 0)}, {"csv", out_path}};
  if (cfg.contains("spec")) m["spec"] = cfg["spec"];
  if (cfg.contains("tol")) m["tol"] = cfg["tol"];
  m.update(o.meta);
  csv << o.csv;
  meta << m.dump(2) << '\n';
  csv.close();
  meta.close();
  if (!csv || !meta) {
    err << "convexlab: failed writing " << out_path << '\n';
    return kUnwritable;
  }
  for (const auto& [path, content] : o.extra_files) {
    std::ofstream f(path, std::ios::binary);
    if (!(f << content)) {
      err << "convexlab: cannot write " << path << '\n';
      return kUnwritable;
    }
  }
  out << o.summary << '\n';
  return kOk;
}

}  // namespace convexlab::cli
