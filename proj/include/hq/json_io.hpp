#pragma once

// JSON schemas for types, instances, matrices, reps, Higgs tuples and
// solutions. Numbers are written as strings: rationals as "p/q", floats in
// shortest round-trip form. Readers accept either strings or JSON numbers.

#include "hq/ds_solver.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace hq {

using Json = nlohmann::json;

/// Malformed input; carries the offending field path (and line when known).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json load_json_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write");
  out << text;
}

/// Two-space indented dump with a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace json_detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(path + "." + key + ": missing field");
  return *it;
}

inline long as_long(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    try {
      const Rational q = parse_rational(j.get<std::string>());
      if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    } catch (const std::exception&) {
    }
  }
  throw InputError(path + ": expected an integer");
}

inline Rational as_rational(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw InputError(path + ": expected a rational (number or \"p/q\" string)");
}

inline double as_double(const Json& j, const std::string& path) {
  try {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_double(j.get<std::string>());
  } catch (const std::exception&) {
  }
  throw InputError(path + ": expected a number");
}

inline Complex as_complex(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) throw InputError(path + ": complex entries are [re, im]");
    return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
  }
  return {as_double(j, path), 0.0};
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path + ": expected an array");
  return j;
}

inline std::string idx(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

}  // namespace json_detail

// ------------------------------------------------------------------ scalars

inline Json to_json(const Rational& q) { return to_string(q); }
inline Json to_json_double(double x) { return to_string(x); }
inline Json to_json(const Complex& z) { return Json::array({to_string(z.real()), to_string(z.imag())}); }

// ----------------------------------------------------------------- matrices

inline Json to_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < m.rows(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < m.cols(); ++b) row.push_back(to_string(m(a, b)));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < m.rows(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < m.cols(); ++b) row.push_back(to_json(m(a, b)));
    rows.push_back(row);
  }
  return rows;
}

/// Rows of entries; `rows`/`cols` give the shape when the matrix has no rows or columns.
template <class T>
Matrix<T> matrix_from_json(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  using namespace json_detail;
  array(j, path);
  if (j.size() != rows) throw InputError(path + ": expected " + std::to_string(rows) + " rows");
  Matrix<T> m(rows, cols);
  for (std::size_t a = 0; a < rows; ++a) {
    const Json& row = array(j[a], idx(path, a));
    if (row.size() != cols) throw InputError(idx(path, a) + ": expected " + std::to_string(cols) + " entries");
    for (std::size_t b = 0; b < cols; ++b) {
      const std::string p = idx(idx(path, a), b);
      if constexpr (ScalarTraits<T>::exact)
        m(a, b) = as_rational(row[b], p);
      else
        m(a, b) = as_complex(row[b], p);
    }
  }
  return m;
}

/// Shape inferred from the rows (square matrices of a known rank use this).
template <class T>
Matrix<T> square_from_json(const Json& j, const std::string& path, std::size_t r) {
  return matrix_from_json<T>(j, path, r, r);
}

/// Basis matrix r x k with k read from the first row.
template <class T>
Matrix<T> basis_from_json(const Json& j, const std::string& path, std::size_t r) {
  json_detail::array(j, path);
  const std::size_t k = j.empty() ? 0 : json_detail::array(j[0], path + "[0]").size();
  return matrix_from_json<T>(j, path, r, k);
}

// ------------------------------------------------------------ combinatorics

inline Json to_json(const MarkedLine& l) {
  Json pts = Json::array();
  for (const auto& x : l.points) pts.push_back(to_string(x));
  return pts;
}

inline std::vector<Rational> points_from_json(const Json& j, const std::string& path) {
  using namespace json_detail;
  std::vector<Rational> pts;
  array(j, path);
  for (std::size_t k = 0; k < j.size(); ++k) pts.push_back(as_rational(j[k], idx(path, k)));
  return pts;
}

inline Json to_json(const ParabolicType& t) {
  Json j;
  j["rank"] = t.rank;
  j["K"] = t.K;
  j["points"] = to_json(t.line);
  j["multiplicities"] = t.multiplicities;
  j["weights"] = t.weights;
  return j;
}

/// {"rank", "K", "points", "multiplicities", "weights"}; points default to 0..n-1.
inline ParabolicType type_from_json(const Json& j, const std::string& path = "type") {
  using namespace json_detail;
  ParabolicType t;
  t.rank = static_cast<int>(as_long(field(j, "rank", path), path + ".rank"));
  t.K = as_long(field(j, "K", path), path + ".K");
  const Json& mult = array(field(j, "multiplicities", path), path + ".multiplicities");
  const Json& wts = array(field(j, "weights", path), path + ".weights");
  if (mult.size() != wts.size()) throw InputError(path + ": multiplicities and weights differ in length");
  for (std::size_t x = 0; x < mult.size(); ++x) {
    const std::string pm = idx(path + ".multiplicities", x), pw = idx(path + ".weights", x);
    std::vector<int> m;
    std::vector<long> w;
    for (std::size_t k = 0; k < array(mult[x], pm).size(); ++k) m.push_back(static_cast<int>(as_long(mult[x][k], idx(pm, k))));
    for (std::size_t k = 0; k < array(wts[x], pw).size(); ++k) w.push_back(as_long(wts[x][k], idx(pw, k)));
    t.multiplicities.push_back(std::move(m));
    t.weights.push_back(std::move(w));
  }
  if (j.contains("points"))
    t.line.points = points_from_json(j["points"], path + ".points");
  else
    t.line = MarkedLine::standard(mult.size());
  if (t.line.size() != t.multiplicities.size())
    throw InputError(path + ".points: one point per multiplicity list required");
  try {
    t.validate(true);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  return t;
}

inline Json to_json(const NilpotentClass& c) {
  Json j;
  j["partition"] = c.partition();
  j["rank_sequence"] = c.rank_sequence;
  return j;
}

/// {"partition": [...]} or {"rank_sequence": [...]} (needs the rank).
inline NilpotentClass class_from_json(const Json& j, int rank, const std::string& path) {
  using namespace json_detail;
  try {
    if (j.is_object() && j.contains("partition")) {
      std::vector<int> p;
      const Json& a = array(j["partition"], path + ".partition");
      for (std::size_t k = 0; k < a.size(); ++k) p.push_back(static_cast<int>(as_long(a[k], idx(path + ".partition", k))));
      auto c = NilpotentClass::from_partition(p);
      if (c.rank != rank) throw InputError(path + ".partition: sums to " + std::to_string(c.rank) + ", rank is " + std::to_string(rank));
      return c;
    }
    if (j.is_object() && j.contains("rank_sequence")) {
      NilpotentClass c;
      c.rank = rank;
      const Json& a = array(j["rank_sequence"], path + ".rank_sequence");
      for (std::size_t k = 0; k < a.size(); ++k) c.rank_sequence.push_back(static_cast<int>(as_long(a[k], idx(path + ".rank_sequence", k))));
      c.validate();
      return c;
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  throw InputError(path + ": expected {\"partition\": [...]} or {\"rank_sequence\": [...]}");
}

inline Json to_json(const DSInstance& inst) {
  Json j;
  j["rank"] = inst.rank;
  Json cls = Json::array();
  for (const auto& c : inst.classes) cls.push_back(to_json(c));
  j["classes"] = cls;
  j["points"] = to_json(inst.line());
  return j;
}

inline DSInstance instance_from_json(const Json& j, const std::string& path = "instance") {
  using namespace json_detail;
  DSInstance inst;
  inst.rank = static_cast<int>(as_long(field(j, "rank", path), path + ".rank"));
  if (inst.rank <= 0) throw InputError(path + ".rank: must be positive");
  const Json& cls = array(field(j, "classes", path), path + ".classes");
  for (std::size_t k = 0; k < cls.size(); ++k) inst.classes.push_back(class_from_json(cls[k], inst.rank, idx(path + ".classes", k)));
  if (j.contains("points")) inst.points = points_from_json(j["points"], path + ".points");
  try {
    inst.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  return inst;
}

// --------------------------------------------------------------------- reps

inline Json to_json(const StarQuiver& q) {
  Json j;
  j["rank"] = q.rank;
  j["arms"] = q.arms;
  return j;
}

inline StarQuiver quiver_from_json(const Json& j, const std::string& path) {
  using namespace json_detail;
  StarQuiver q;
  q.rank = static_cast<int>(as_long(field(j, "rank", path), path + ".rank"));
  const Json& arms = array(field(j, "arms", path), path + ".arms");
  for (std::size_t a = 0; a < arms.size(); ++a) {
    std::vector<int> chain;
    const std::string p = idx(path + ".arms", a);
    for (std::size_t k = 0; k < array(arms[a], p).size(); ++k) chain.push_back(static_cast<int>(as_long(arms[a][k], idx(p, k))));
    q.arms.push_back(std::move(chain));
  }
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  return q;
}

inline std::string map_key(char side, std::size_t arm, int level) {
  return std::string(1, side) + "/" + std::to_string(arm + 1) + "/" + std::to_string(level);
}

/// {"field": "rational"|"complex", "quiver", "points", "maps": {"f/j/i": M, "g/j/i": M}}.
template <class T>
Json to_json(const StarRep<T>& rep) {
  Json j;
  j["field"] = ScalarTraits<T>::exact ? "rational" : "complex";
  j["quiver"] = to_json(rep.quiver);
  j["points"] = to_json(MarkedLine{rep.points});
  Json maps = Json::object();
  for (std::size_t a = 0; a < rep.quiver.num_arms(); ++a)
    for (int i = 1; i <= rep.quiver.length(a); ++i) {
      maps[map_key('f', a, i)] = to_json(rep.f_at(a, i));
      maps[map_key('g', a, i)] = to_json(rep.g_at(a, i));
    }
  j["maps"] = maps;
  return j;
}

inline bool rep_is_exact(const Json& j) { return j.is_object() && j.value("field", std::string("complex")) == "rational"; }

/// Reads either field; a complex reader accepts rational files.
template <class T>
StarRep<T> rep_from_json(const Json& j, const std::string& path = "rep") {
  using namespace json_detail;
  if constexpr (ScalarTraits<T>::exact)
    if (!rep_is_exact(j)) throw InputError(path + ".field: exact mode needs a rational representation");
  const StarQuiver q = quiver_from_json(field(j, "quiver", path), path + ".quiver");
  std::vector<Rational> pts;
  if (j.contains("points")) pts = points_from_json(j["points"], path + ".points");
  if (!pts.empty() && pts.size() != q.num_arms()) throw InputError(path + ".points: one point per arm required");
  StarRep<T> rep = StarRep<T>::zero(q, pts);
  const Json& maps = field(j, "maps", path);
  for (std::size_t a = 0; a < q.num_arms(); ++a)
    for (int i = 1; i <= q.length(a); ++i) {
      const auto out = static_cast<std::size_t>(q.dim(a, i)), in = static_cast<std::size_t>(q.dim(a, i - 1));
      const std::string fk = map_key('f', a, i), gk = map_key('g', a, i);
      rep.f_at(a, i) = matrix_from_json<T>(field(maps, fk, path + ".maps"), path + ".maps." + fk, out, in);
      rep.g_at(a, i) = matrix_from_json<T>(field(maps, gk, path + ".maps"), path + ".maps." + gk, in, out);
    }
  return rep;
}

// -------------------------------------------------------------- Higgs tuples

/// {"type", "residues": [M...], "flags": [[basis of F^1, ..., F^{sigma-1}] per point]}.
template <class T>
Json to_json(const HiggsTuple<T>& h) {
  Json j;
  j["field"] = ScalarTraits<T>::exact ? "rational" : "complex";
  j["type"] = to_json(h.type);
  Json res = Json::array();
  for (const auto& a : h.residues) res.push_back(to_json(a));
  j["residues"] = res;
  Json fl = Json::array();
  for (const auto& steps : h.flags) {
    Json s = Json::array();
    for (const auto& b : steps) s.push_back(to_json(b));
    fl.push_back(s);
  }
  j["flags"] = fl;
  return j;
}

/// Raised for inputs outside the homologically trivial setting.
struct NotHomologicallyTrivial : InputError {
  using InputError::InputError;
};

template <class T>
HiggsTuple<T> higgs_from_json(const Json& j, const std::string& path = "higgs") {
  using namespace json_detail;
  if constexpr (ScalarTraits<T>::exact)
    if (!rep_is_exact(j)) throw InputError(path + ".field: exact mode needs rational residues");
  if (j.is_object() && j.contains("splitting_type")) {
    const Json& st = array(j["splitting_type"], path + ".splitting_type");
    for (std::size_t k = 0; k < st.size(); ++k)
      if (as_long(st[k], idx(path + ".splitting_type", k)) != 0)
        throw NotHomologicallyTrivial(path + ".splitting_type: underlying bundle is not trivial, so the tuple is "
                                      "not homologically trivial and has no quiver description");
  }
  HiggsTuple<T> h;
  h.type = type_from_json(field(j, "type", path), path + ".type");
  const auto r = static_cast<std::size_t>(h.type.rank);
  const Json& res = array(field(j, "residues", path), path + ".residues");
  if (res.size() != h.type.num_points()) throw InputError(path + ".residues: one residue per marked point required");
  for (std::size_t k = 0; k < res.size(); ++k) h.residues.push_back(square_from_json<T>(res[k], idx(path + ".residues", k), r));
  const Json& fl = array(field(j, "flags", path), path + ".flags");
  if (fl.size() != h.type.num_points()) throw InputError(path + ".flags: one flag per marked point required");
  for (std::size_t x = 0; x < fl.size(); ++x) {
    const std::string p = idx(path + ".flags", x);
    std::vector<Matrix<T>> steps;
    for (std::size_t s = 0; s < array(fl[x], p).size(); ++s) steps.push_back(basis_from_json<T>(fl[x][s], idx(p, s), r));
    h.flags.push_back(std::move(steps));
  }
  return h;
}

// ---------------------------------------------------------------- solutions

inline Json to_json(const std::vector<std::vector<int>>& v) { return Json(v); }

inline Json words_to_json(const std::vector<std::vector<std::size_t>>& words) {
  Json w = Json::array();
  for (const auto& word : words) w.push_back(word);
  return w;
}

inline Json to_json(const RestartRecord& r) {
  Json j;
  j["index"] = r.index;
  j["status"] = r.status;
  j["iterations"] = r.iterations;
  j["best_residual"] = to_json_double(r.best_residual);
  return j;
}

/// {"instance", "matrices": [M...], "residual", ...}; only instance and matrices are read back.
inline Json to_json(const DSSolution& s) {
  Json j;
  j["instance"] = to_json(s.instance);
  Json ms = Json::array();
  for (const auto& a : s.matrices) ms.push_back(to_json(a));
  j["matrices"] = ms;
  j["residual"] = to_json_double(s.residual);
  j["restart"] = s.restart;
  j["refined"] = s.refined;
  j["irreducible"] = s.irreducible;
  j["ranks"] = s.ranks;
  j["burnside_words"] = words_to_json(s.words);
  return j;
}

struct LoadedSolution {
  DSInstance instance;
  std::vector<CMatrix> matrices;
};

inline LoadedSolution solution_from_json(const Json& j, const std::string& path = "solution") {
  using namespace json_detail;
  LoadedSolution s;
  s.instance = instance_from_json(field(j, "instance", path), path + ".instance");
  const Json& ms = array(field(j, "matrices", path), path + ".matrices");
  if (ms.size() != s.instance.size()) throw InputError(path + ".matrices: one matrix per class required");
  const auto r = static_cast<std::size_t>(s.instance.rank);
  for (std::size_t k = 0; k < ms.size(); ++k) s.matrices.push_back(square_from_json<Complex>(ms[k], idx(path + ".matrices", k), r));
  return s;
}

// ------------------------------------------------------------ Hitchin data

inline Json to_json(const QPoly& p) {
  Json c = Json::array();
  for (const auto& q : p.coeffs()) c.push_back(to_string(q));
  return c;
}

inline Json to_json(const HitchinPoint& hp) {
  Json j;
  j["rank"] = hp.rank;
  j["points"] = to_json(hp.line);
  Json cs = Json::array();
  for (const auto& p : hp.coefficients) cs.push_back(to_json(p));
  j["coefficients"] = cs;  // p_j low to high
  Json text = Json::array();
  for (const auto& p : hp.coefficients) text.push_back(to_string(p));
  j["coefficients_text"] = text;
  return j;
}

inline Json orders_to_json(const std::vector<std::vector<int>>& orders) {
  Json out = Json::array();
  for (const auto& row : orders) {
    Json r = Json::array();
    for (int o : row)
      if (o == kInfiniteOrder)
        r.push_back("inf");
      else
        r.push_back(o);
    out.push_back(r);
  }
  return out;
}

inline Json to_json(const VanishingReport& v) {
  Json j;
  j["orders"] = orders_to_json(v.orders);
  j["eps"] = v.eps;
  j["deg"] = v.deg;
  j["forced"] = v.forced;
  j["degree_ok"] = v.degree_ok;
  j["member"] = v.member;
  j["exact_orders"] = v.exact_orders;
  return j;
}

inline Json to_json(const IntegralityResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reduced"] = r.reduced;
  j["irreducible"] = r.irreducible;
  j["reason"] = r.reason;
  if (r.certificate_z) j["certificate_z"] = to_string(*r.certificate_z);
  if (r.factor) j["factor"] = to_string(*r.factor);
  return j;
}

}  // namespace hq
