#pragma once

// Random types, instances and group elements shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <random>
#include <vector>

#include "hq/hq.hpp"

namespace hq::testing {

/// p/q in canonical form.
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Random composition of r into positive parts.
inline std::vector<int> random_composition(int r, std::mt19937_64& rng) {
  std::vector<int> parts;
  int left = r;
  while (left > 0) {
    std::uniform_int_distribution<int> d(1, left);
    parts.push_back(d(rng));
    left -= parts.back();
  }
  return parts;
}

/// Random partition of r (nonincreasing parts).
inline std::vector<int> random_partition(int r, std::mt19937_64& rng) {
  auto p = random_composition(r, rng);
  std::sort(p.rbegin(), p.rend());
  return p;
}

inline ParabolicType random_type(std::mt19937_64& rng, int max_rank = 6, int max_points = 8) {
  std::uniform_int_distribution<int> dr(1, max_rank), dn(4, max_points);
  ParabolicType t;
  t.rank = dr(rng);
  t.line = MarkedLine::standard(static_cast<std::size_t>(dn(rng)));
  long top = 0;
  for (std::size_t x = 0; x < t.line.size(); ++x) {
    auto n = random_composition(t.rank, rng);
    std::vector<long> a;
    long w = std::uniform_int_distribution<long>(0, 2)(rng);
    for (std::size_t i = 0; i < n.size(); ++i) {
      a.push_back(w);
      w += std::uniform_int_distribution<long>(1, 3)(rng);
    }
    top = std::max(top, a.back());
    t.multiplicities.push_back(n);
    t.weights.push_back(a);
  }
  t.K = top + 1 + std::uniform_int_distribution<long>(0, 50)(rng);
  t.validate();
  return t;
}

/// Random nilpotent classes with 2r <= sum gamma^1, none of them zero.
inline DSInstance random_feasible_instance(std::mt19937_64& rng, int min_rank, int max_rank, int min_points,
                                           int max_points) {
  std::uniform_int_distribution<int> dr(min_rank, max_rank), dn(min_points, max_points);
  for (;;) {
    DSInstance inst;
    inst.rank = dr(rng);
    const int n = dn(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<int> p;
      do p = random_partition(inst.rank, rng);
      while (static_cast<int>(p.size()) == inst.rank);
      inst.classes.push_back(NilpotentClass::from_partition(p));
    }
    if (ds_feasible(inst.classes, inst.rank).feasible) return inst;
  }
}

inline CMatrix random_invertible(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(n, n);
  for (auto& v : m.data()) v = Complex(nd(rng), nd(rng));
  for (std::size_t a = 0; a < n; ++a) m(a, a) += Complex(2.0, 0.0);
  return m;
}

inline GroupElement<Complex> random_group_element(const StarQuiver& q, std::mt19937_64& rng) {
  GroupElement<Complex> h;
  h.center = random_invertible(static_cast<std::size_t>(q.rank), rng);
  h.arms.resize(q.num_arms());
  for (std::size_t j = 0; j < q.num_arms(); ++j)
    for (int i = 1; i <= q.length(j); ++i) h.arms[j].push_back(random_invertible(q.dim(j, i), rng));
  return h;
}

}  // namespace hq::testing
