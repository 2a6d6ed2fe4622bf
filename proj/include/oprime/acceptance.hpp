#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oprime/pbwmod.hpp"

namespace oprime::acceptance {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  double seconds;
  double limit;  // seconds
  std::string detail;
};

/// Modules and filtration lengths gathered while the criteria run, for the
/// soundness criterion.
struct Collector {
  std::vector<pbwmod::ModulePtr> modules;
  /// (full length, g0 length) of every standard filtration computed.
  std::vector<std::pair<std::size_t, std::size_t>> filtration_lengths;
};

CriterionResult run_criterion(int id, Collector& c);

/// Criteria 1..10 in order; 10 uses what 1..9 collected.
std::vector<CriterionResult> run_all();

/// "[PASS] 3  singular-vector formula  (1.20 s / 30 s)  detail"
std::string format_line(const CriterionResult& r);

}  // namespace oprime::acceptance
