// Rank 2, four square-zero residues: solve, certify, move to the quiver side
// and back, then check the Hitchin point exactly.

#include "hq/hq.hpp"

#include <iostream>

using namespace hq;

int main() {
  DSInstance inst;
  inst.rank = 2;
  inst.classes.assign(4, NilpotentClass::from_partition({2}));

  const DSResult res = solve(inst);
  if (!res.success) {
    std::cout << "no certified solution\n";
    return 1;
  }
  const DSSolution& sol = *res.solution;
  std::cout << "residual " << to_string(sol.residual) << " at restart " << sol.restart << ", "
            << sol.words.size() << " Burnside words\n";
  for (std::size_t i = 0; i < sol.matrices.size(); ++i) {
    const CMatrix& a = sol.matrices[i];
    std::cout << "A_" << i + 1 << " = [[" << to_string(a(0, 0).real()) << ", " << to_string(a(0, 1).real()) << "], ["
              << to_string(a(1, 0).real()) << ", " << to_string(a(1, 1).real()) << "]]\n";
  }

  const CStarRep rep = solution_to_rep(sol.matrices, inst);
  std::cout << "moment map of the StarRep: " << to_string(moment_map(rep).max_abs()) << "\n";

  const ParabolicType t = type_from_classes(inst.classes, inst.line());
  const CHiggsTuple back = quiver_to_higgs(rep, t);
  double gap = 0.0;
  for (std::size_t i = 0; i < back.residues.size(); ++i) gap = std::max(gap, max_abs(back.residues[i] - sol.matrices[i]));
  std::cout << "residues recovered from the StarRep within " << to_string(gap) << "\n";

  const HitchinCrossCheck hc = hitchin_cross_check(sol.matrices, inst);
  if (!hc.point) {
    std::cout << "exact check: " << hc.note << "\n";
    return 1;
  }
  std::cout << "p_2(z) = " << to_string(hc.point->coefficients[1]) << "\n";
  std::cout << "member " << hc.member << ", exact orders " << hc.exact_orders << ", spectral curve "
            << to_string(is_integral(*hc.point).verdict) << "\n";
  return 0;
}
