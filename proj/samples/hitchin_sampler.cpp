// Draws integral Hitchin points for the rank 2 full-flag type on four points.

#include "hq/hq.hpp"

#include <cstdlib>
#include <iostream>

using namespace hq;

int main(int argc, char** argv) {
  const int count = argc > 1 ? std::atoi(argv[1]) : 5;

  ParabolicType t;
  t.rank = 2;
  t.K = 16;
  t.line = MarkedLine::standard(4);
  t.multiplicities.assign(4, {1, 1});
  t.weights.assign(4, {0, 1});

  const auto hd = hitchin_base_degrees(t);
  std::cout << "deg_j:";
  for (long d : hd.deg) std::cout << " " << d;
  std::cout << ", dim H_P = " << hd.dimension << "\n";

  for (int seed = 0; seed < count; ++seed) {
    const SampledHitchinPoint s = sample_hitchin_point(t, static_cast<std::uint64_t>(seed));
    std::cout << "seed " << seed << ": p_2 = " << to_string(s.point.coefficients[1]) << "  (" << s.retries
              << " retries, " << to_string(s.integrality.verdict) << ")\n";
  }
  return 0;
}
