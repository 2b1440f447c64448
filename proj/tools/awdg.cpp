// Command-line driver: run, converge, energy, spectrum.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "awdg/driver.hpp"
#include "report.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kUnstable = 3, kCheckFailed = 4 };

// Write to a temporary name, then rename, so readers never see a partial file.
void write_file(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
  }
  fs::rename(tmp, path);
}

awdg::RunConfig load_config(const std::string& path, const std::optional<std::string>& output,
                            const std::optional<unsigned>& seed) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream is(path);
    if (!is) throw awdg::ConfigError("--config", "cannot open " + path);
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
      throw awdg::ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
  }
  auto cfg = awdg::config_from_json(j);
  if (output) cfg.output_dir = *output;
  if (seed) cfg.seed = *seed;
  return awdg::resolve(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG solver for the advective wave equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> output;
  std::optional<unsigned> seed;
  int workers = 1;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--output", output, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "seed for randomized diagnostics");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  auto* run_cmd = app.add_subcommand("run", "single simulation: run.csv and summary.json");
  auto* conv_cmd = app.add_subcommand("converge", "convergence sweep: errors.csv and rates.csv");
  auto* energy_cmd = app.add_subcommand("energy", "energy-identity audit");
  auto* spec_cmd = app.add_subcommand("spectrum", "power-iteration spectral radius: spectrum.csv");
  for (auto* sub : {run_cmd, conv_cmd, energy_cmd, spec_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  awdg::RunConfig cfg;
  try {
    cfg = load_config(config_path, output, seed);
  } catch (const awdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  try {
    const fs::path out = cfg.output_dir;
    fs::create_directories(out);
    if (run_cmd->parsed()) {
      const auto r = awdg::run(cfg, workers);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      write_file(out / "run.csv", awdg::report::run_csv(r));
      write_file(out / "summary.json", awdg::report::summary_json(cfg, r).dump(2) + "\n");
      std::cout << fmt::format("n = {}, q = {}, steps = {}, dt = {:.6e}\nerr_u = {:.6e}  err_v = {:.6e}\n",
                               r.n, r.q, r.steps, r.dt, r.final_errors.u, r.final_errors.v);
    } else if (conv_cmd->parsed()) {
      const auto rs = awdg::converge(cfg, workers);
      for (const auto& cr : rs)
        for (const auto& w : cr.warnings) std::cerr << "warning: " << w << "\n";
      write_file(out / "errors.csv", awdg::report::errors_csv(rs));
      write_file(out / "rates.csv", awdg::report::rates_csv(cfg, rs));
      std::cout << awdg::report::rate_table(cfg, rs);
    } else if (energy_cmd->parsed()) {
      constexpr double tol = 1e-9;
      const auto audit = awdg::energy_audit(cfg, workers);
      write_file(out / "energy.csv", awdg::report::energy_csv(audit));
      std::cout << awdg::report::energy_text(audit, tol);
      if (!audit.passed(tol)) return kCheckFailed;
    } else if (spec_cmd->parsed()) {
      const auto rows = awdg::spectrum(cfg, workers);
      write_file(out / "spectrum.csv", awdg::report::spectrum_csv(rows));
      for (const auto& r : rows)
        std::cout << fmt::format("q = {:2d}  n = {:4d}  radius = {:.6e}{}\n", r.q, r.n, r.radius,
                                 r.converged ? "" : "  (not converged)");
    }
  } catch (const awdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const awdg::InstabilityError& e) {
    std::cerr << "instability: non-finite state at step " << e.step << "\n";
    return kUnstable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
