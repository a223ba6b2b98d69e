#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include "srp/accept.hpp"

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  srp::AcceptanceReport report = srp::run_acceptance(std::cout, only);
  return report.all_pass() && !report.results.empty() ? 0 : 1;
}
