#ifndef SOLMARCH_SELFTEST_HPP
#define SOLMARCH_SELFTEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace solmarch {

struct SelfTestCheck {
  std::string name;
  bool pass;
  double value;
  double threshold;
  std::string detail;
};

struct SelfTestOptions {
  // Debug hook: integrate with z'' = -e^{-2z} x'^2 + e^{-2z} y'^2, which does
  // not conserve e^{2z} y'. The conservation check must catch it.
  bool mutate_ode = false;
  int geodesics = 10;
};

std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options = {});

/// Prints a PASS/FAIL table; returns true when every check passed.
bool print_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& out);

}  // namespace solmarch

#endif  // SOLMARCH_SELFTEST_HPP
