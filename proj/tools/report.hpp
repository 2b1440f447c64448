#pragma once

#include <string>
#include <vector>

#include <fmt/format.h>

#include "awdg/driver.hpp"

namespace awdg::report {

// Shortest round-trip decimal; fmt never consults the locale here.
inline std::string num(double x) { return fmt::format("{}", x); }

inline std::string join_w(const std::vector<double>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? ";" : "") + num(w[i]);
  return out;
}

inline std::string run_csv(const RunResult& r) {
  std::string out = "step,t,energy,err_u,err_v\n";
  for (const auto& s : r.samples)
    out += fmt::format("{},{},{},{},{}\n", s.step, num(s.t), num(s.energy), num(s.err_u), num(s.err_v));
  return out;
}

inline nlohmann::json summary_json(const RunConfig& cfg, const RunResult& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["q"] = r.q;
  j["h"] = r.h;
  j["dt"] = r.dt;
  j["steps"] = r.steps;
  j["err_u"] = r.final_errors.u;
  j["err_v"] = r.final_errors.v;
  j["err_energy"] = r.final_errors.energy;
  j["energy_initial"] = r.energy_initial;
  j["energy_final"] = r.energy_final;
  j["energy_drift"] = r.energy_final - r.energy_initial;
  if (r.energy_initial > 0.0)
    j["energy_drift_relative"] = (r.energy_final - r.energy_initial) / r.energy_initial;
  else
    j["energy_drift_relative"] = nullptr;
  j["max_energy_increase"] = r.max_energy_increase;
  j["warnings"] = r.warnings;
  j["config"] = config_to_json(cfg);
  return j;
}

inline std::string errors_csv(const std::vector<ConvergenceResult>& rs) {
  std::string out = "q,n,h,err_u,err_v,err_energy\n";
  for (const auto& cr : rs) {
    const auto& rep = cr.report;
    for (std::size_t i = 0; i < rep.n.size(); ++i)
      out += fmt::format("{},{},{},{},{},{}\n", cr.q, rep.n[i], num(rep.h[i]), num(rep.errors_u[i]),
                         num(rep.errors_v[i]), num(rep.errors_energy[i]));
  }
  return out;
}

inline std::string rates_csv(const RunConfig& cfg, const std::vector<ConvergenceResult>& rs) {
  std::string out = "q,s,flux,w,c,rate_u,rate_v\n";
  for (const auto& cr : rs)
    out += fmt::format("{},{},{},{},{},{},{}\n", cr.q, cr.s, cfg.flux.preset, join_w(cfg.w), num(cfg.c),
                       num(cr.report.rate_u), num(cr.report.rate_v));
  return out;
}

inline std::string rate_table(const RunConfig& cfg, const std::vector<ConvergenceResult>& rs) {
  std::string out = fmt::format("{} {} flux, w = ({}), c = {}\n", cfg.problem, cfg.flux.preset,
                                join_w(cfg.w), num(cfg.c));
  for (const auto& cr : rs) {
    out += fmt::format("q = {}, s = {}\n", cr.q, cr.s);
    out += fmt::format("  {:>6} {:>12} {:>12} {:>12}\n", "n", "h", "err_u", "err_v");
    const auto& rep = cr.report;
    for (std::size_t i = 0; i < rep.n.size(); ++i)
      out += fmt::format("  {:>6} {:>12.5e} {:>12.5e} {:>12.5e}\n", rep.n[i], rep.h[i], rep.errors_u[i],
                         rep.errors_v[i]);
    out += fmt::format("  rate_u = {:.2f}  rate_v = {:.2f}  (finest {} grids)\n", rep.rate_u, rep.rate_v,
                       rep.fit_window);
  }
  return out;
}

inline std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::string out = "q,n,h,radius,converged\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{}\n", r.q, r.n, num(r.h), num(r.radius), r.converged ? 1 : 0);
  return out;
}

inline std::string energy_csv(const EnergyAudit& a) {
  std::string out = "check,energy,lhs,rhs,residual\n";
  for (const auto& c : a.checks)
    out += fmt::format("{},{},{},{},{}\n", c.label, num(c.energy), num(c.identity.lhs), num(c.identity.rhs),
                       num(c.identity.residual));
  return out;
}

inline std::string energy_text(const EnergyAudit& a, double tol) {
  double max_rhs = -1e300;
  for (const auto& c : a.checks) max_rhs = std::max(max_rhs, c.identity.rhs);
  std::string out = fmt::format("checks: {}\nmax residual: {:.3e} (tolerance {:.0e}) {}\n", a.checks.size(),
                                a.max_residual, tol, a.max_residual <= tol ? "PASS" : "FAIL");
  out += fmt::format("max boundary-sum dE/dt: {:.6e}\n", max_rhs);
  if (a.sign_claimed)
    out += fmt::format("sign (dE/dt <= 0): {}\n", a.sign_ok ? "PASS" : "FAIL");
  else if (a.conservative)
    out += fmt::format("conservation (dE/dt = 0): {}\n", a.sign_ok ? "PASS" : "FAIL");
  else
    out += "sign: not claimed for this flux\n";
  return out;
}

}  // namespace awdg::report
