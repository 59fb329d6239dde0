// Runs the nine acceptance criteria and prints one PASS/FAIL line for each.
#include <cstdio>
#include <functional>
#include <string>

#include "prym/verify.hpp"

using namespace prym;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<SuiteResult()> run;
};

void report(const Criterion& c, const SuiteResult& r) {
  std::printf("%s  criterion %d  %-20s %zu checks, %.1f s\n", r.pass() ? "PASS" : "FAIL", c.id, c.name.c_str(),
              r.checks.size(), r.seconds);
  for (auto& k : r.checks)
    if (!k.pass) std::printf("      failed: %s  value %.3g  tol %.3g  %s\n", k.name.c_str(), k.value, k.tol, k.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  VerifyOptions<double> o;
  o.random_configs = 20;
  auto cfgs21 = config_list(o);
  VerifyOptions<double> o5 = o;
  o5.random_configs = 5;
  auto cfgs6 = config_list(o5);
  const auto& std_cfg = cfgs21.front();

  std::vector<Criterion> all = {
      {1, "combinatorics", [] { return suite_combinatorics(); }},
      {2, "lattice", [] { return suite_lattice(); }},
      {3, "periods", [&] { return suite_periods(cfgs21, o.quad); }},
      {4, "theta kernel", [&] { return suite_theta_kernel(std_cfg, o); }},
      {5, "vanishing table", [&] { return suite_vanishing(std_cfg, o); }},
      {6, "cross ratio", [&] { return suite_cross_ratio(cfgs21, o); }},
      {7, "quadratic relations", [&] { return suite_quadratic(std_cfg, o); }},
      {8, "main theorem", [&] { return suite_main_theorem(cfgs6, o); }},
      {9, "chi_const", [] { return suite_chi_const<double>(); }},
  };
  int failed = 0;
  for (auto& c : all) {
    SuiteResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = SuiteResult{c.name, {}, 0};
      r.exact("no exception", false, e.what());
    }
    report(c, r);
    failed += !r.pass();
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
