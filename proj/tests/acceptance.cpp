// One line per acceptance criterion; details for failing rows follow the line.
#include <cstdio>
#include <cstdlib>

#include "lefschetz/suite.hpp"

int main(int argc, char** argv) {
  lefschetz::SuiteOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  bool all = true;
  for (int id = 1; id <= lefschetz::kCriteriaCount; ++id) {
    const auto c = lefschetz::run_criterion(id, options);
    all = all && c.pass;
    std::printf("criterion %2d %s  %s [%s]\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str(),
                c.summary.c_str());
    for (const auto& r : c.rows)
      if (!r.pass)
        std::printf("    failed: %s  oracle %s  value %s\n", r.item.c_str(), r.oracle.c_str(),
                    r.value.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
