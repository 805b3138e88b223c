#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "conslaw/acceptance.hpp"

int main(int argc, char** argv) {
  bool strict = false, verbose = true;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--strict") {
      strict = true;
    } else if (a == "--quiet") {
      verbose = false;
    } else {
      ids.push_back(std::atoi(a.c_str()));
    }
  }
  bool all = true;
  int count = 0;
  if (ids.empty())
    for (int i = 1; i <= 9; ++i) ids.push_back(i);
  for (int id : ids) {
    const auto r = conslaw::run_criterion(id);
    std::cout << conslaw::format_result(r, verbose) << std::endl;
    all = all && r.passed;
    count += r.passed;
  }
  std::cout << count << " / " << ids.size() << " criteria passed" << std::endl;
  return strict && !all ? 1 : 0;
}
