#pragma once

// Self-check suites behind `tfbd verify`.

#include <string>
#include <vector>

namespace tfbd {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  std::vector<double> times{0.0};  // grid for the regularity suite
  double alpha = 1.0, lambda = 1.0, mu = 1.0, nu = 1.0;
  int order = 60;
  int n_max = 30;
  long long replicas = 100000;
  unsigned long long seed = 20261016ULL;
  unsigned workers = 1;
};

/// Known suites: coeffs, regularity, oracles, laplace, all. Throws DomainError otherwise.
std::vector<Check> run_suite(const std::string& suite, const VerifyOptions& options);

const std::vector<std::string>& suite_names();

}  // namespace tfbd
