// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Optional arguments select criteria by number.
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "erlq/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);

  erlq::Validator v(erlq::ValidationSetup::reference());
  int failures = 0;
  for (int c : selected) {
    const erlq::CheckResult r = v.run(c);
    std::printf("criterion %2d %s: %s | measured %.4g, threshold %.4g, %.1fs | %s\n", r.criterion,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.threshold, r.seconds, r.detail.c_str());
    for (const auto& [key, value] : r.metrics) std::printf("    %s = %.6g\n", key.c_str(), value);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(selected.size()) - failures, selected.size());
  return failures == 0 ? 0 : 1;
}
