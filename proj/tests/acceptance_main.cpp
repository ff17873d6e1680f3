#include <cstdlib>
#include <iostream>

#include "qmarkov/selftest.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240501;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  const auto results = qmarkov::run_acceptance(std::cout, seed);
  return qmarkov::all_passed(results) && !results.empty() ? 0 : 1;
}
