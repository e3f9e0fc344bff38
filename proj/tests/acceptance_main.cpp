// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <iostream>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (argc > 1) seed = std::stoull(argv[1]);
  const auto results = polite::acceptance::run_all(seed, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
