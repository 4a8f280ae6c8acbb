// Acceptance suite: one [PASS]/[FAIL] line per criterion, then a JSON
// report. Exit status is 0 only when every criterion passes.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>

#include "gossim/acceptance.hpp"
#include "gossim/output.hpp"

int main(int argc, char** argv) {
  using namespace gossim::acceptance;
  CLI::App app{"gossim acceptance suite"};
  std::string scale = "desk", out = "acceptance";
  Options opt;
  app.add_option("--scale", scale)->check(CLI::IsMember({"desk", "paper"}));
  app.add_flag("--paper-savings", opt.paper_savings, "run the savings criterion on the full-size workload");
  app.add_option("--seeds", opt.seeds, "matched seeds for the statistical criteria")->check(CLI::Range(10u, 1000u));
  app.add_option("--out", out, "report directory");
  CLI11_PARSE(app, argc, argv);
  opt.scale = scale == "paper" ? Scale::Paper : Scale::Desk;
  opt.work_dir = std::filesystem::path(out) / "work";

  nlohmann::json criteria = nlohmann::json::array();
  int failed = 0;
  const auto started = std::chrono::steady_clock::now();
  auto last = started;
  run_all(opt, [&](const CriterionResult& r) {
    const auto now = std::chrono::steady_clock::now();
    std::cout << format_line(r) << " (" << std::chrono::duration<double>(now - last).count() << " s)" << std::endl;
    last = now;
    failed += !r.passed;
    criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"measured", r.measured}, {"expected", r.expected}});
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cout << (failed ? "FAILED: " : "PASSED: ") << (10 - failed) << "/10 criteria passed in " << secs << " s\n";
  gossim::write_file_atomic(std::filesystem::path(out) / "acceptance_report.json",
                            nlohmann::json{{"scale", scale}, {"paper_savings", opt.paper_savings}, {"failed", failed},
                                           {"criteria", criteria}}
                                    .dump(2) +
                                "\n");
  return failed ? 1 : 0;
}
