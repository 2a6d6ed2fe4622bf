#include <iostream>

#include "oprime/acceptance.hpp"

int main() {
  using namespace oprime::acceptance;
  Collector c;
  bool all = true;
  double total = 0;
  for (int id = 1; id <= 10; ++id) {
    auto r = run_criterion(id, c);
    std::cout << format_line(r) << std::endl;
    all = all && r.pass;
    total += r.seconds;
  }
  std::cout << (all ? "all criteria pass" : "some criteria FAIL") << " in " << total << " s" << std::endl;
  return all && total < 300 ? 0 : 1;
}
