#ifndef SRP_ACCEPT_HPP
#define SRP_ACCEPT_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace srp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double statistic = 0.0;  // headline statistic (maximum over sub-checks)
  double threshold = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

// Run the acceptance suite, printing one pass/fail line per criterion.
// 'only' restricts to the given criterion ids (empty = all).
AcceptanceReport run_acceptance(std::ostream& log, const std::set<int>& only = {});

}  // namespace srp

#endif
