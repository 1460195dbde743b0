#pragma once

#include <string>
#include <vector>

namespace spectra {

struct Check {
  std::string name;
  double measured = 0.0;  // error measure of the check
  double tolerance = 0.0;
  bool pass = false;
};

// Analytic-oracle suite: every module against closed forms.
std::vector<Check> run_validation();

}  // namespace spectra
