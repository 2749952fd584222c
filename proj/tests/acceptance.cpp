// One PASS/FAIL line per acceptance criterion, full profile unless "quick" is given.

#include <cstdio>
#include <cstring>

#include "ccr/suite.hpp"

int main(int argc, char** argv) {
  const auto prof = argc > 1 && std::strcmp(argv[1], "quick") == 0 ? ccr::SuiteProfile::quick() : ccr::SuiteProfile::full();
  bool all = true;
  ccr::Stopwatch total;
  for (std::size_t i = 0; i < ccr::criteria().size(); ++i) {
    const auto r = ccr::run_criterion(i, prof);
    all = all && r.pass();
    std::fputs(ccr::criterion_text(r).c_str(), stdout);
    std::fflush(stdout);
  }
  std::printf("%s: %s profile, %.2f s total\n", all ? "ALL PASS" : "FAILURES", prof.name.c_str(), total.seconds());
  return all ? 0 : 1;
}
