// Acceptance suite: every validation criterion at its pinned size and
// tolerance, one PASS/FAIL line per check. Exit code 0 iff everything holds.

#include <cstdio>
#include <cstring>

#include "ltk/validate.hpp"

int main(int argc, char** argv) {
  ltk::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) opts.quick = true;

  const auto report = ltk::run_acceptance(opts);
  for (const auto& c : report.checks)
    std::printf("%s [%s] %s  (measured %.6g, threshold %.6g) %s\n", c.pass ? "PASS" : "FAIL",
                c.id.c_str(), c.name.c_str(), c.measured, c.threshold, c.detail.c_str());
  std::printf("%s\n", report.all_pass() ? "acceptance: all criteria passed"
                                        : "acceptance: FAILURES present");
  return report.all_pass() ? 0 : 1;
}
