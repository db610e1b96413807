// Acceptance suite: runs the bundled checks end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <cstdlib>
#include <iostream>
#include <string>

#include "varid/selfcheck.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: varid_acceptance [--seed S] [--only K]\n";
      return 1;
    }
  }

  std::vector<varid::selfcheck::CheckResult> results;
  try {
    if (only > 0)
      results.push_back(varid::selfcheck::run_criterion(only, seed));
    else
      results = varid::selfcheck::run_all(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.index << ". " << r.name << " — "
              << r.detail << "\n";
    if (!r.pass) ++failed;
  }
  return failed;
}
