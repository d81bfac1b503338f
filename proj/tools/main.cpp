// hq: command-line front end. Every subcommand writes a stable text report
// to stdout and, with --report, a JSON report.
//
// Exit codes: 0 success/PASS, 1 input error, 2 budget exhausted or
// undetermined, 3 internal invariant violation.

#include "hq/hq.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace hq;

namespace {

enum Exit { kOk = 0, kInput = 1, kUndetermined = 2, kInternal = 3 };

struct Options {
  std::string mode = "float";
  std::uint64_t seed = 1;
  double tol = -1.0;
  int restarts = 20;
  std::string out;
  std::string report;
  std::string input;
  std::string type_path;
  std::string rep_out;
  bool hitchin = false;
  int grid = 100;
};

std::string pass(bool b) { return b ? "PASS" : "FAIL"; }

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
  return s;
}

std::string join_orders(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k)
    s += (k ? " " : "") + (v[k] == kInfiniteOrder ? std::string("inf") : std::to_string(v[k]));
  return s;
}

void emit(const Options& o, const Json& report, const std::string& text) {
  std::cout << text;
  if (!o.report.empty()) write_text_file(o.report, dump(report));
}

bool exact_mode(const Options& o) {
  if (o.mode == "exact") return true;
  if (o.mode == "float") return false;
  throw InputError("--mode must be exact or float");
}

// ------------------------------------------------------------------- type

int cmd_type_check(const Options& o) {
  const ParabolicType t = type_from_json(load_json_file(o.input));
  const auto me = mu_eps(t);
  const auto hd = hitchin_base_degrees(t);
  long g1 = 0;
  for (std::size_t x = 0; x < t.num_points(); ++x) g1 += t.gamma_chain(x)[1];
  const bool small = check_small_weights(t);
  const bool ds = 2L * t.rank <= g1;
  const bool integral = integral_base_condition(t);
  const bool simple = simpleness_condition(t);

  std::string s;
  s += "type: rank " + std::to_string(t.rank) + ", " + std::to_string(t.num_points()) + " marked points, K " +
       std::to_string(t.K) + "\n";
  s += "condition        verdict\n";
  s += pad("small-weights", 17) + pass(small) + "\n";
  s += pad("ds-feasible", 17) + pass(ds) + "  (2r = " + std::to_string(2 * t.rank) + ", sum gamma^1 = " +
       std::to_string(g1) + ")\n";
  s += pad("integral-base", 17) + pass(integral) + "\n";
  s += pad("simpleness", 17) + pass(simple) + "\n";
  s += "point  x        gamma            mu               eps\n";
  Json points = Json::array();
  for (std::size_t x = 0; x < t.num_points(); ++x) {
    const auto gam = t.gamma_chain(x);
    s += pad(std::to_string(x + 1), 7) + pad(to_string(t.line.points[x]), 9) + pad(join(gam), 17) +
         pad(join(me[x].mu), 17) + join(me[x].eps) + "\n";
    Json p;
    p["x"] = to_string(t.line.points[x]);
    p["gamma"] = gam;
    p["mu"] = me[x].mu;
    p["eps"] = me[x].eps;
    p["flag_dimensions"] = flag_dimension_vector(t, x);
    points.push_back(p);
  }
  s += "j  deg_j\n";
  for (int j = 1; j <= t.rank; ++j) s += pad(std::to_string(j), 3) + std::to_string(hd.deg[j - 1]) + "\n";
  s += "dim H_P = " + std::to_string(hd.dimension) + "\n";

  Json r;
  r["command"] = "type check";
  r["type"] = to_json(t);
  r["conditions"] = {{"small-weights", pass(small)},
                     {"ds-feasible", pass(ds)},
                     {"integral-base", pass(integral)},
                     {"simpleness", pass(simple)}};
  r["points"] = points;
  r["hitchin_degrees"] = hd.deg;
  r["dim_H_P"] = hd.dimension;
  emit(o, r, s);
  return kOk;
}

// --------------------------------------------------------------------- ds

Json feasibility_json(const DsFeasibility& f) {
  Json j;
  j["feasible"] = f.feasible;
  j["two_r"] = f.lhs;
  j["sum_gamma1"] = f.rhs;
  j["n_at_least_4"] = f.n_at_least_4;
  j["r_at_least_4"] = f.r_at_least_4;
  return j;
}

int cmd_ds_solve(const Options& o) {
  if (exact_mode(o)) throw InputError("--mode exact: the optimizer runs in floating mode only");
  const DSInstance inst = instance_from_json(load_json_file(o.input));
  DSConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  if (o.tol > 0) cfg.tolerance = o.tol;
  const DSResult res = solve(inst, cfg);

  std::string s;
  s += "instance: rank " + std::to_string(inst.rank) + ", " + std::to_string(inst.size()) + " classes\n";
  s += "ds-feasible: " + pass(res.feasibility.feasible) + " (2r = " + std::to_string(res.feasibility.lhs) +
       ", sum gamma^1 = " + std::to_string(res.feasibility.rhs) + ")\n";
  s += "restart  status            iterations  best_residual\n";
  Json restarts = Json::array();
  for (const auto& r : res.restarts) {
    s += pad(std::to_string(r.index), 9) + pad(r.status, 18) + pad(std::to_string(r.iterations), 12) +
         to_string(r.best_residual) + "\n";
    restarts.push_back(to_json(r));
  }
  Json rep;
  rep["command"] = "ds solve";
  rep["instance"] = to_json(inst);
  rep["feasibility"] = feasibility_json(res.feasibility);
  rep["restarts"] = restarts;
  rep["seed"] = o.seed;
  rep["tolerance"] = to_json_double(cfg.tolerance);
  rep["success"] = res.success;
  if (res.success) {
    const DSSolution& sol = *res.solution;
    s += "result: certified (residual " + to_string(sol.residual) + ", restart " + std::to_string(sol.restart) +
         ", Burnside words " + std::to_string(sol.words.size()) + ")\n";
    rep["solution"] = to_json(sol);
    if (!o.out.empty()) write_text_file(o.out, dump(to_json(sol)));
  } else {
    s += "result: no certified solution within " + std::to_string(cfg.restarts) + " restarts" +
         (res.feasibility.feasible ? "" : " (instance is infeasible)") + "\n";
  }
  emit(o, rep, s);
  return res.success ? kOk : kUndetermined;
}

Json hitchin_json(const HitchinCrossCheck& hc) {
  Json j;
  j["rationalized"] = hc.rationalized;
  j["exact_profile"] = hc.exact_profile;
  j["member"] = hc.member;
  j["exact_orders"] = hc.exact_orders;
  j["denominator_bound"] = hc.denominator_bound;
  j["note"] = hc.note;
  if (hc.orders) j["vanishing"] = to_json(*hc.orders);
  if (hc.point) {
    j["point"] = to_json(*hc.point);
    j["integrality"] = to_json(is_integral(*hc.point));
  }
  return j;
}

std::string hitchin_text(const VanishingReport& v) {
  std::string s = "j  deg_j  orders at x_1..x_n     eps\n";
  for (std::size_t j = 0; j < v.orders.size(); ++j)
    s += pad(std::to_string(j + 1), 3) + pad(std::to_string(v.deg[j]), 7) + pad(join_orders(v.orders[j]), 23) +
         join(v.eps[j]) + "\n";
  s += "member: " + pass(v.member) + ", exact orders: " + pass(v.exact_orders) + "\n";
  return s;
}

int cmd_ds_verify(const Options& o) {
  const LoadedSolution ls = solution_from_json(load_json_file(o.input));
  VerifyTol tol;
  if (o.tol > 0) tol.residual = o.tol;
  const VerifyReport v = verify(ls.matrices, ls.instance, tol, o.hitchin);
  std::string s;
  s += "residual: " + to_string(v.residual) + " " + pass(v.residual_ok) + "\n";
  s += "rank profile: " + pass(v.profile_ok) + "\n";
  s += "irreducible: " + pass(v.irreducible) + " (Burnside words " + std::to_string(v.words.size()) + ")\n";
  Json rep;
  rep["command"] = "ds verify";
  rep["residual"] = to_json_double(v.residual);
  rep["residual_ok"] = v.residual_ok;
  rep["ranks"] = v.ranks;
  rep["profile_ok"] = v.profile_ok;
  rep["irreducible"] = v.irreducible;
  rep["burnside_words"] = words_to_json(v.words);
  if (v.hitchin) {
    rep["hitchin"] = hitchin_json(*v.hitchin);
    if (v.hitchin->orders) s += hitchin_text(*v.hitchin->orders);
    else s += "hitchin: " + v.hitchin->note + "\n";
  }
  rep["ok"] = v.ok();
  s += "verdict: " + pass(v.ok()) + "\n";
  emit(o, rep, s);
  return v.ok() ? kOk : kUndetermined;
}

// ----------------------------------------------------------------- bridge

template <class T>
Json invariants_json(const HiggsInvariantReport& inv) {
  Json j;
  j["sum_zero"] = inv.sum_zero;
  j["sum_residual"] = to_json_double(inv.sum_residual);
  j["dims_ok"] = inv.dims_ok;
  j["nested_ok"] = inv.nested_ok;
  j["strong_preservation"] = inv.strong_preservation;
  j["degenerate_line"] = inv.degenerate_line;
  j["problems"] = inv.problems;
  return j;
}

std::string invariants_text(const HiggsInvariantReport& inv) {
  std::string s;
  s += pad("sum of residues zero", 28) + pass(inv.sum_zero) + "\n";
  s += pad("flag dimensions", 28) + pass(inv.dims_ok) + "\n";
  s += pad("flags nested", 28) + pass(inv.nested_ok) + "\n";
  s += pad("strong preservation", 28) + pass(inv.strong_preservation) + "\n";
  return s;
}

template <class T>
void stability_section(const HiggsTuple<T>& h, Json& rep, std::string& s) {
  if (!check_small_weights(h.type)) {
    rep["stability"] = "not-applicable";
    s += "stability: not applicable (small-weights fails)\n";
    return;
  }
  const auto st = stability_verdict(h);
  rep["stability"] = to_string(st.verdict);
  rep["slope"] = to_string(st.full_slope);
  s += std::string("stability: ") + to_string(st.verdict) + " (slope " + to_string(st.full_slope) + ")\n";
}

/// Exact Hitchin tables for a rational tuple.
int hitchin_section(const QHiggsTuple& h, Json& rep, std::string& s) {
  const HitchinPoint hp = char_poly(h);
  const VanishingReport v = vanishing_orders(hp, h.type);
  const IntegralityResult ir = is_integral(hp);
  Json j;
  j["point"] = to_json(hp);
  j["vanishing"] = to_json(v);
  j["integrality"] = to_json(ir);
  rep["hitchin"] = j;
  for (std::size_t k = 0; k < hp.coefficients.size(); ++k)
    s += "p_" + std::to_string(k + 1) + "(z) = " + to_string(hp.coefficients[k]) + "\n";
  s += hitchin_text(v);
  s += std::string("integrality: ") + to_string(ir.verdict) + " (" + ir.reason + ")\n";
  return ir.verdict == Integrality::undetermined ? kUndetermined : kOk;
}

/// Floating tuples: rationalize when the exact rank profile survives, else report undetermined.
int hitchin_section(const CHiggsTuple& h, Json& rep, std::string& s) {
  const auto float_ranks = rank_profile(h.residues, NumericTol{1e-8, 1e-300});
  for (std::int64_t den : {std::int64_t{1000}, std::int64_t{1000000}, std::int64_t{1000000000}}) {
    const auto q = rationalize_higgs(h, den);
    if (!q || !check_invariants(*q).ok() || rank_profile(q->residues) != float_ranks) continue;
    s += "hitchin: rationalized with denominators <= " + std::to_string(den) + "\n";
    const int code = hitchin_section(*q, rep, s);
    rep["hitchin"]["rationalized_denominator_bound"] = den;
    return code;
  }
  rep["hitchin"] = {{"verdict", "undetermined"}, {"reason", "rationalization did not preserve the rank profile"}};
  s += "hitchin: undetermined (rationalization did not preserve the rank profile)\n";
  return kUndetermined;
}

template <class T>
int bridge_to_higgs(const Options& o) {
  const StarRep<T> rep_in = rep_from_json<T>(load_json_file(o.input));
  const ParabolicType t = type_from_json(load_json_file(o.type_path));
  const HiggsTuple<T> h = quiver_to_higgs(rep_in, t);
  const auto inv = check_invariants(h);
  Json rep;
  rep["command"] = "bridge to-higgs";
  rep["invariants"] = invariants_json<T>(inv);
  std::string s = invariants_text(inv);
  if (!inv.ok()) {
    emit(o, rep, s);
    return kInternal;
  }
  stability_section(h, rep, s);
  int code = kOk;
  if (o.hitchin) code = hitchin_section(h, rep, s);
  if (!o.out.empty()) write_text_file(o.out, dump(to_json(h)));
  emit(o, rep, s);
  return code;
}

template <class T>
int bridge_to_quiver(const Options& o) {
  const HiggsTuple<T> h = higgs_from_json<T>(load_json_file(o.input));
  const auto inv = check_invariants(h);
  Json rep;
  rep["command"] = "bridge to-quiver";
  rep["invariants"] = invariants_json<T>(inv);
  std::string s = invariants_text(inv);
  if (!inv.ok()) {
    emit(o, rep, s);
    throw InputError("Higgs tuple violates its invariants");
  }
  const StarRep<T> out = higgs_to_quiver(h);
  const double mom = moment_map(out).max_abs();
  rep["moment_max_abs"] = to_json_double(mom);
  s += pad("moment map of output", 28) + to_string(mom) + "\n";
  stability_section(h, rep, s);
  int code = kOk;
  if (o.hitchin) code = hitchin_section(h, rep, s);
  if (!o.out.empty()) write_text_file(o.out, dump(to_json(out)));
  emit(o, rep, s);
  return code;
}

int cmd_bridge_from_solution(const Options& o) {
  const LoadedSolution ls = solution_from_json(load_json_file(o.input));
  const ParabolicType t = type_from_classes(ls.instance.classes, ls.instance.line());
  const FlagsResult fr = flags_from_solution(ls.matrices, t);
  const auto inv = check_invariants(fr.tuple, BridgeTol{1e-7, NumericTol{1e-8, 1e-300}});
  const CStarRep rep_out = higgs_to_quiver(fr.tuple, BridgeTol{1e-7, NumericTol{1e-8, 1e-300}});
  const double mom = moment_map(rep_out).max_abs();
  Json rep;
  rep["command"] = "bridge from-solution";
  rep["type"] = to_json(t);
  rep["completion_used"] = fr.completion_used;
  rep["invariants"] = invariants_json<Complex>(inv);
  rep["moment_max_abs"] = to_json_double(mom);
  std::string s = invariants_text(inv);
  s += pad("moment map of quiver rep", 28) + to_string(mom) + "\n";
  s += pad("flag completion used", 28) + (fr.completion_used ? "yes" : "no") + "\n";
  int code = inv.ok() ? kOk : kInternal;
  if (o.hitchin && inv.ok()) {
    const HitchinCrossCheck hc = hitchin_cross_check(ls.matrices, ls.instance);
    rep["hitchin"] = hitchin_json(hc);
    if (hc.orders) s += hitchin_text(*hc.orders);
    else s += "hitchin: " + hc.note + "\n";
    if (!(hc.member && hc.exact_orders)) code = kUndetermined;
  }
  if (!o.out.empty()) write_text_file(o.out, dump(to_json(fr.tuple)));
  if (!o.rep_out.empty()) write_text_file(o.rep_out, dump(to_json(rep_out)));
  emit(o, rep, s);
  return code;
}

// ---------------------------------------------------------------- poisson

int cmd_poisson_check(const Options& o) {
  const CStarRep at = rep_from_json<Complex>(load_json_file(o.input));
  PoissonOptions po;
  po.grid = o.grid;
  po.seed = o.seed;
  const PoissonReport pr = poisson_check(at, po);
  Json rep;
  rep["command"] = "poisson check";
  rep["seed"] = o.seed;
  rep["grid"] = o.grid;
  rep["entry_bracket_max"] = to_json_double(pr.entry_bracket_max);
  rep["commutativity_max"] = to_json_double(pr.commutativity_max);
  rep["commutativity_t1_t1_max"] = to_json_double(pr.commutativity_t11_max);
  rep["antisymmetry_max"] = to_json_double(pr.antisymmetry_max);
  rep["jacobi_max"] = to_json_double(pr.jacobi_max);
  rep["gradient_rel_max"] = to_json_double(pr.gradient_rel_max);
  rep["delta_identity_max"] = to_json_double(pr.delta_identity_max);
  rep["delta_partial_fraction_max"] = to_json_double(pr.delta_partial_fraction_max);
  std::string s;
  s += "identity                 max residual\n";
  s += pad("entry bracket", 25) + to_string(pr.entry_bracket_max) + "\n";
  s += pad("commutativity", 25) + to_string(pr.commutativity_max) + "\n";
  s += pad("commutativity t=t'=1", 25) + to_string(pr.commutativity_t11_max) + "\n";
  s += pad("antisymmetry", 25) + to_string(pr.antisymmetry_max) + "\n";
  s += pad("jacobi", 25) + to_string(pr.jacobi_max) + "\n";
  s += pad("gradient (relative)", 25) + to_string(pr.gradient_rel_max) + "\n";
  s += pad("delta identity", 25) + to_string(pr.delta_identity_max) + "\n";
  s += pad("delta partial fractions", 25) + to_string(pr.delta_partial_fraction_max) + "\n";
  bool ok = pr.entry_bracket_max < 1e-9 && pr.commutativity_max < 1e-8 && pr.jacobi_max < 1e-9 &&
            pr.gradient_rel_max < 1e-6;
  if (pr.count) {
    rep["count"] = {{"rank", pr.count->rank},
                    {"expected_dim_H_P", pr.count->expected},
                    {"tangent_dim", pr.count->tangent_dim},
                    {"ok", pr.count->ok()}};
    s += "hamiltonian count: rank " + std::to_string(pr.count->rank) + ", dim H_P " +
         std::to_string(pr.count->expected) + " " + pass(pr.count->ok()) + "\n";
    ok = ok && pr.count->ok();
  } else {
    rep["count"] = nullptr;
    s += "hamiltonian count: skipped (rep is not moment-zero)\n";
  }
  rep["ok"] = ok;
  s += "verdict: " + pass(ok) + "\n";
  emit(o, rep, s);
  return ok ? kOk : kInternal;
}

void common_flags(CLI::App* c, Options& o, bool with_mode = true) {
  if (with_mode) c->add_option("--mode", o.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  c->add_option("--seed", o.seed, "random seed");
  c->add_option("--tol", o.tol, "tolerance");
  c->add_option("--restarts", o.restarts, "restart budget");
  c->add_option("--out", o.out, "output file");
  c->add_option("--report", o.report, "JSON report file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quiver and parabolic Higgs toolkit"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> run;

  auto* type = app.add_subcommand("type", "parabolic types");
  type->require_subcommand(1);
  auto* type_check = type->add_subcommand("check", "conditions and degree tables of a type");
  type_check->add_option("--type", o.input, "type JSON")->required();
  common_flags(type_check, o);
  type_check->callback([&] { run = [&] { return cmd_type_check(o); }; });

  auto* ds = app.add_subcommand("ds", "nilpotent Deligne-Simpson problem");
  ds->require_subcommand(1);
  auto* ds_solve = ds->add_subcommand("solve", "solve an instance");
  ds_solve->add_option("--instance", o.input, "instance JSON")->required();
  common_flags(ds_solve, o);
  ds_solve->callback([&] { run = [&] { return cmd_ds_solve(o); }; });
  auto* ds_verify = ds->add_subcommand("verify", "certify a solution");
  ds_verify->add_option("--solution", o.input, "solution JSON")->required();
  ds_verify->add_flag("--hitchin", o.hitchin, "exact Hitchin membership check");
  common_flags(ds_verify, o);
  ds_verify->callback([&] { run = [&] { return cmd_ds_verify(o); }; });

  auto* bridge = app.add_subcommand("bridge", "quiver representations and Higgs tuples");
  bridge->require_subcommand(1);
  auto* to_higgs = bridge->add_subcommand("to-higgs", "StarRep to Higgs tuple");
  to_higgs->add_option("--rep", o.input, "rep JSON")->required();
  to_higgs->add_option("--type", o.type_path, "type JSON")->required();
  to_higgs->add_flag("--hitchin", o.hitchin, "append vanishing orders and integrality");
  common_flags(to_higgs, o);
  to_higgs->callback([&] {
    run = [&] { return exact_mode(o) ? bridge_to_higgs<Rational>(o) : bridge_to_higgs<Complex>(o); };
  });
  auto* to_quiver = bridge->add_subcommand("to-quiver", "Higgs tuple to StarRep");
  to_quiver->add_option("--higgs", o.input, "Higgs JSON")->required();
  to_quiver->add_flag("--hitchin", o.hitchin, "append vanishing orders and integrality");
  common_flags(to_quiver, o);
  to_quiver->callback([&] {
    run = [&] { return exact_mode(o) ? bridge_to_quiver<Rational>(o) : bridge_to_quiver<Complex>(o); };
  });
  auto* from_sol = bridge->add_subcommand("from-solution", "Higgs tuple and StarRep of a DS solution");
  from_sol->add_option("--solution", o.input, "solution JSON")->required();
  from_sol->add_option("--rep-out", o.rep_out, "StarRep output file");
  from_sol->add_flag("--hitchin", o.hitchin, "exact Hitchin membership check");
  common_flags(from_sol, o);
  from_sol->callback([&] { run = [&] { return cmd_bridge_from_solution(o); }; });

  auto* poisson = app.add_subcommand("poisson", "bracket identities");
  poisson->require_subcommand(1);
  auto* pcheck = poisson->add_subcommand("check", "sweep bracket identities around a rep");
  pcheck->add_option("--rep", o.input, "rep JSON")->required();
  pcheck->add_option("--grid", o.grid, "commutativity samples");
  common_flags(pcheck, o);
  pcheck->callback([&] { run = [&] { return cmd_poisson_check(o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  try {
    return run ? run() : kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const RetryBudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kUndetermined;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
