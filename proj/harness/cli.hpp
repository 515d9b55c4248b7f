#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "report.hpp"

namespace harness {

struct SurveyConfig {
  std::string presentationFile;
  std::vector<std::string> words;  // explicit elements; random ones when empty
  int randomLength = 4;
  int count = 10;
  int L = 8;        // trees for simple elements are drawn from O_L(g)
  int steps = 4;    // random moves per tree
  int radius = 4;   // cut-pair candidate radius
  int64_t budget = gw::kDefaultBudget;
  uint64_t seed = 1;
  int workers = 1;
  bool timings = false;
};

// rows sorted by element; deterministic unless timings are on
json run_survey(const gw::PresPtr& p, const SurveyConfig& cfg);

// exit code: 0 success, 1 domain or validation failure, 2 usage
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harness
