#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fpplab/harness.hpp"

namespace {

struct Common {
  std::string config;
  std::string recipe;
  bool recipe_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c, const std::string& fallback) {
  c.recipe = fallback;
  cmd->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option_function<std::string>("--recipe", [&c](const std::string& r) {
    c.recipe = r;
    c.recipe_set = true;
  }, "recipe name; with --config, selects the section (default: " + fallback + ", or the first section)");
  cmd->add_option_function<std::uint64_t>("--seed", [&c](std::uint64_t s) {
    c.seed = s;
    c.seed_set = true;
  }, "base seed");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

int run(const Common& c) {
  fpplab::ExperimentConfig cfg =
      c.config.empty() ? fpplab::default_config(c.recipe)
                       : fpplab::ExperimentConfig::load(c.config, c.recipe_set ? c.recipe : "");
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.out.empty()) cfg.out = c.out;
  if (c.threads > 0) cfg.threads = c.threads;
  fpplab::RunRecord rec = fpplab::run_recipe(cfg);
  std::cout << rec.recipe << " config_hash=" << rec.config_hash << " wall=" << rec.wall_seconds << "s";
  if (rec.guard_failures) std::cout << " guard_failures=" << rec.guard_failures;
  std::cout << "\n" << rec.summary.dump(2) << "\n";
  for (const auto& f : rec.files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpplab: first-passage percolation boundary laboratory"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    const char* recipe;
  };
  const Sub subs[] = {
      {"simulate", "one run per replication, dump boundary timelines", "simulate"},
      {"scan-exponent", "boundary exponent fit over a horizon grid", "smooth-scaling"},
      {"holes", "hole census and hole-candidate tables", "holes"},
      {"contours", "animal enumeration and alpha-bad contour rates", "contour-count"},
      {"ratio-table", "bound ratios across models and times", "ratio-table"},
      {"lemmas", "regularity, truncation and Bernstein checkers", "lemmas"},
  };
  std::vector<Common> opts(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_common(cmds.back(), opts[i], subs[i].recipe);
  }

  std::string report_dir = "out", report_out;
  auto* report = app.add_subcommand("report", "aggregate recipe summaries into one JSON document");
  report->add_option("--out", report_dir, "directory holding <recipe>.json files")->capture_default_str();
  report->add_option("--file", report_out, "write here instead of <out>/report.json");

  app.add_subcommand("recipes", "list recipe names");

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i)
      if (cmds[i]->parsed()) return run(opts[i]);
    if (report->parsed()) {
      auto j = fpplab::aggregate_report(report_dir);
      std::string path = report_out.empty() ? (std::filesystem::path(report_dir) / "report.json").string() : report_out;
      std::ofstream(path) << j.dump(2) << "\n";
      std::cout << "wrote " << path << " (" << j["runs"].size() << " runs)\n";
      return 0;
    }
    for (const auto& n : fpplab::recipe_names()) std::cout << n << "\n";
  } catch (const fpplab::GuardFailure& e) {
    std::cerr << "guard failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
