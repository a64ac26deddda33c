// Runs every acceptance criterion and prints one pass/fail line each; the
// process exit code is the overall verdict.

#include <cstdio>

#include "pm/acceptance.hpp"

int main() {
  const auto results = pm::acceptance::run_all();
  for (const auto& r : results) {
    std::printf("%s (%.2fs)\n", pm::acceptance::format_line(r).c_str(), r.seconds);
    std::fflush(stdout);
  }
  return pm::acceptance::all_pass(results) ? 0 : 1;
}
