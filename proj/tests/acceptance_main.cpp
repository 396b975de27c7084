#include <cstring>
#include <iostream>

#include "conjdist/acceptance.hpp"

int main(int argc, char** argv) {
  conjdist::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) options.level = conjdist::AcceptanceLevel::Quick;

  int failed = 0;
  conjdist::run_acceptance(options, [&](const conjdist::CriterionResult& r) {
    std::cout << conjdist::format_line(r) << std::endl;
    failed += !r.pass;
  });
  std::cout << (failed ? "FAILED " : "ALL PASS ") << conjdist::kCriterionCount - failed << "/"
            << conjdist::kCriterionCount << std::endl;
  return failed ? 1 : 0;
}
