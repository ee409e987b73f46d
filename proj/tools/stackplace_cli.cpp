#include "stackplace/errors.hpp"
#include "stackplace/harness.hpp"
#include "stackplace/trace_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace sp = stackplace;

namespace {

void print_report(const sp::ExperimentReport& rep) {
  std::printf("scenario %s (%s), seed %llu, %d trials\n", rep.scenario.c_str(),
              std::string(sp::to_string(rep.family)).c_str(),
              static_cast<unsigned long long>(rep.seed), rep.trials);
  if (!rep.results.empty()) {
    std::printf("  success %d/%d = %.3f, 95%% CI [%.3f, %.3f]\n", rep.successes, rep.trials,
                rep.success_rate, rep.success_ci.low, rep.success_ci.high);
    for (auto o : {sp::Outcome::ReleasedStable, sp::Outcome::ReleasedToppled,
                   sp::Outcome::MaxIterations, sp::Outcome::NoContact}) {
      if (int n = rep.count(o); n > 0) {
        std::printf("  %-16s %d\n", std::string(sp::to_string(o)).c_str(), n);
      }
    }
    for (const auto& r : rep.results) {
      if (!r.error.empty()) std::printf("  trial %d error: %s\n", r.trial, r.error.c_str());
    }
  }
  for (const auto& d : rep.direction_by_iteration) {
    std::printf("  iteration %d shift direction error: median %.2f deg over %d\n", d.iteration,
                d.median_deg, d.count);
  }
  if (rep.sweep) {
    for (const auto& b : rep.sweep->by_radius) {
      std::printf("  offset %.4f m: median error %.2f deg (%d)\n", b.radius, b.median_error_deg,
                  b.count);
    }
    std::printf("  crossover offset (45 deg): %.4f m\n", rep.sweep->crossover_offset);
  }
  if (rep.press) {
    for (const auto& c : rep.press->curve) {
      std::printf("  torque %8.3f N*m: median error %.3f deg, degenerate %d/%d\n", c.torque,
                  c.median_error_deg, c.degenerate, c.count);
    }
    std::printf("  max direction error %.3f deg\n", rep.press->max_error_deg);
  }
  for (const auto& c : rep.checks) {
    std::printf("  [%s] %s: %g (threshold %g)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.value, c.threshold);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Force-torque guided stacking experiments"};
  app.require_subcommand(1);

  std::string input;
  sp::RunOptions options;
  std::uint64_t seed = 0;
  std::string out_dir;

  auto add_common = [&](CLI::App* cmd, const char* what) {
    cmd->add_option(what, input, "Input file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--jobs,-j", options.jobs, "Parallel trials")->check(CLI::PositiveNumber);
    cmd->add_option("--out,-o", out_dir, "Directory for reports, traces and tables");
  };
  CLI::App* run = app.add_subcommand("run", "Run every trial of a scenario");
  add_common(run, "scenario");
  CLI::App* sweep = app.add_subcommand("sweep", "First-press shift for a grid of offsets");
  add_common(sweep, "scenario");
  CLI::App* press = app.add_subcommand("press-check", "Synthetic finger-press direction check");
  add_common(press, "scenario");
  CLI::App* plot = app.add_subcommand("plot-data", "Force/torque norms during descent");
  plot->add_option("trace", input, "Trace file")->required()->check(CLI::ExistingFile);
  plot->add_option("--out,-o", out_dir, "Directory for the table (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      const sp::PlacementTrace trace = sp::read_trace(std::filesystem::path(input));
      if (out_dir.empty()) {
        sp::emit_contact_plot_data(trace, std::cout);
      } else {
        std::filesystem::create_directories(out_dir);
        const auto path = std::filesystem::path(out_dir) /
                          (std::filesystem::path(input).stem().string() + ".plot.txt");
        sp::emit_contact_plot_data(trace, path);
        std::printf("wrote %s\n", path.string().c_str());
      }
      return 0;
    }

    sp::Scenario scenario = sp::load_scenario(input);
    if (run->parsed() ? run->count("--seed") : sweep->parsed() ? sweep->count("--seed")
                                                                : press->count("--seed")) {
      options.seed = seed;
    }
    options.out_dir = out_dir;

    sp::ExperimentReport report;
    if (run->parsed()) {
      report = sp::run_scenario(scenario, options);
    } else if (sweep->parsed()) {
      if (!scenario.sweep) throw sp::ScenarioError(input + ": no sweep section");
      report = sp::run_sweep(scenario, options);
    } else {
      if (!scenario.press_check) throw sp::ScenarioError(input + ": no press_check section");
      report = sp::run_press_check(scenario, options);
    }
    print_report(report);
    if (!out_dir.empty()) {
      std::printf("report written to %s\n", out_dir.c_str());
    }
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "stackplace: %s\n", e.what());
    return 2;
  }
}
