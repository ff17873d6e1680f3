#ifndef QMARKOV_SELFTEST_HPP
#define QMARKOV_SELFTEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmarkov {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the full property suite (strong subadditivity, entropy oracles,
// decomposition round trips, both certifiers, classical consistency,
// determinism and file I/O) and prints one pass/fail line per criterion.
std::vector<CriterionResult> run_acceptance(std::ostream& out,
                                            std::uint64_t seed = 20240501);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace qmarkov

#endif
