#include "lasekk/cli_io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <random>

#include "lasekk/cli_io/csv.hpp"
#include "lasekk/cli_io/svg.hpp"
#include "lasekk/kk_transform.hpp"
#include "lasekk/laser_clamp.hpp"
#include "lasekk/pump_probe.hpp"

namespace lasekk::cli {
namespace {

constexpr double kRateLogMin = 5.0;  // log10 of rad/s
constexpr double kRateLogMax = 9.0;

std::vector<double> to_std(const VectorX<double>& v) { return {v.data(), v.data() + v.size()}; }

double relative(std::complex<double> a, std::complex<double> ref) {
  return std::abs(a - ref) / std::abs(ref);
}

void add_numbers(CsvTable& t, const std::string& name, const std::string& unit, std::vector<double> v) {
  t.add(name, unit).numbers = std::move(v);
}

SampledSpectrumd clamped_spectrum(const EffectiveConfig& cfg) {
  const auto prof = sample_clamped_profile(cfg.medium, cfg.cavity, cfg.grid);
  return {prof.grid, prof.chi_prime, prof.chi_double_prime, cfg.tails};
}

}  // namespace

std::string OutputPaths::with_suffix(const std::string& suffix) const {
  std::filesystem::path p(csv);
  p.replace_extension();
  return p.string() + suffix;
}

std::string default_output_name(Command c) {
  switch (c) {
    case Command::LaserProfile: return "laser_profile.csv";
    case Command::ProbeSpectrum: return "probe_spectrum.csv";
    case Command::KKCheck: return "kk_check.csv";
    case Command::OracleCompare: return "oracle_compare.csv";
  }
  return "out.csv";
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv("LASE_KK_OUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

double probe_window(const PumpProbeParamsd& p) { return 5.0 * std::max(effective_rabi(p), p.eta()); }

std::vector<PumpProbeParamsd> random_probe_draws(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // 53 random bits -> [0, 1); fixed here so draws do not depend on the
  // standard library's distribution algorithms.
  const auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  const auto log_rate = [&] { return std::pow(10.0, kRateLogMin + (kRateLogMax - kRateLogMin) * unit()); };
  std::vector<PumpProbeParamsd> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    PumpProbeParamsd p;
    p.gamma_parallel = log_rate();
    p.gamma_ba = log_rate();
    p.r_op = log_rate();
    const double eta = p.eta();
    p.omega1 = 10.0 * eta * unit();
    p.delta_pump = 5.0 * eta * (2.0 * unit() - 1.0);
    p.gain_g = 1.0;
    out.push_back(p);
  }
  return out;
}

std::vector<Eigen::Index> spread_indices(const UniformGrid<double>& grid, int k) {
  std::vector<Eigen::Index> out;
  const Eigen::Index n = grid.count;
  for (int j = 0; j < k; ++j) {
    auto idx = static_cast<Eigen::Index>(std::floor((j + 0.5) * double(n) / k));
    if (grid.point(idx) == 0.0) idx = idx + 1 < n ? idx + 1 : idx - 1;
    if (grid.point(idx) == 0.0) continue;
    if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
  }
  return out;
}

int run_laser_profile(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log) {
  const auto prof = sample_clamped_profile(cfg.medium, cfg.cavity, cfg.grid);
  CsvTable t;
  add_numbers(t, "detuning", kUnitRate, to_std(prof.grid.points()));
  add_numbers(t, "chi_prime", kUnitNone, to_std(prof.chi_prime));
  add_numbers(t, "chi_double_prime", kUnitNone, to_std(prof.chi_double_prime));
  add_numbers(t, "omega_sq", kUnitRateSq, to_std(prof.omega_sq));
  write_csv_file(out.csv, t);

  const auto band = lasing_band(cfg.medium, cfg.cavity);
  const auto kinks_re = detect_kinks(prof, Component::ChiPrime);
  const auto kinks_im = detect_kinks(prof, Component::ChiDoublePrime);
  CsvTable k;
  auto& comp = k.add("component", "text");
  auto& where = k.add("detuning", kUnitRate);
  auto& offset = k.add("edge_offset_steps", kUnitNone);
  for (const auto* list : {&kinks_re, &kinks_im}) {
    for (double x : *list) {
      comp.text.push_back(list == &kinks_re ? "chi_prime" : "chi_double_prime");
      where.numbers.push_back(x);
      offset.numbers.push_back(band ? (std::abs(x) - band->half_width) / prof.grid.step()
                                    : std::nan(""));
    }
  }
  write_csv_file(out.with_suffix("_kinks.csv"), k);

  if (cfg.svg) {
    const auto x = to_std(prof.grid.points());
    write_svg_file(out.with_suffix(".svg"),
                   {{"(a) effective gain", "detuning (rad/s)", "chi''", {{x, to_std(prof.chi_double_prime)}}},
                    {"(b) dispersion", "detuning (rad/s)", "chi'", {{x, to_std(prof.chi_prime)}}},
                    {"(c) intensity", "detuning (rad/s)", "Omega^2 (rad^2/s^2)", {{x, to_std(prof.omega_sq)}}}});
  }

  log << "laser-profile: ";
  if (band)
    log << "lasing half_width=" << format_double(band->half_width) << " rad_per_s";
  else
    log << "no lasing (gq=" << format_double(cfg.gq) << " <= 1)";
  log << " kinks_chi_prime=" << kinks_re.size() << " kinks_chi_double_prime=" << kinks_im.size()
      << " points=" << prof.grid.count << "\n";
  return 0;
}

int run_probe_spectrum(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log) {
  const auto& p = cfg.probe;
  const auto poles = response_poles(p);
  const auto s = spectrum_sweep(p, cfg.grid);
  CsvTable t = spectrum_table(s, "delta");
  double worst = 0;
  if (cfg.oracles) {
    std::vector<double> re, im, dev;
    for (Eigen::Index i = 0; i < cfg.grid.count; ++i) {
      const double d = cfg.grid.point(i);
      const auto solved = probe_chi_solve(p, d).chi;
      re.push_back(solved.real());
      im.push_back(solved.imag());
      dev.push_back(relative({s.chi_prime(i), s.chi_double_prime(i)}, solved));
      worst = std::max(worst, dev.back());
    }
    add_numbers(t, "chi_prime_solve", kUnitNone, std::move(re));
    add_numbers(t, "chi_double_prime_solve", kUnitNone, std::move(im));
    add_numbers(t, "rel_dev_closed_solve", kUnitNone, std::move(dev));
  }
  write_csv_file(out.csv, t);

  if (cfg.svg) {
    const auto x = to_std(cfg.grid.points());
    write_svg_file(out.with_suffix(".svg"),
                   {{"probe absorption (chi'' > 0) and gain (chi'' < 0)", "delta (rad/s)", "chi''",
                     {{x, to_std(s.chi_double_prime)}}},
                    {"probe dispersion", "delta (rad/s)", "chi'", {{x, to_std(s.chi_prime)}}}});
  }

  log << "probe-spectrum: points=" << cfg.grid.count
      << " effective_rabi=" << format_double(effective_rabi(p))
      << " n0=" << format_double(zeroth_order(p).n0) << " stable=" << (poles.stable ? "yes" : "no");
  if (cfg.oracles) log << " max_rel_closed_solve=" << format_double(worst);
  log << "\n";
  if (cfg.oracles && !(worst <= kBoundClosedSolve)) return 3;
  return 0;
}

int run_kk_check(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log) {
  SampledSpectrumd s;
  if (!cfg.input.empty())
    s = read_spectrum_csv(cfg.input, cfg.tails);
  else if (cfg.family == Family::Laser)
    s = clamped_spectrum(cfg);
  else
    s = spectrum_sweep(cfg.probe, cfg.grid), s.tails = cfg.tails;

  const auto r = kk_check(s);
  CsvTable t;
  const auto x = to_std(s.grid.points());
  add_numbers(t, "detuning", kUnitRate, x);
  add_numbers(t, "chi_prime", kUnitNone, to_std(s.chi_prime));
  add_numbers(t, "chi_prime_kk", kUnitNone, to_std(r.chi_prime_from_kk));
  add_numbers(t, "residual_forward", kUnitNone, to_std(r.residual_forward));
  add_numbers(t, "chi_double_prime", kUnitNone, to_std(s.chi_double_prime));
  add_numbers(t, "chi_double_prime_kk", kUnitNone, to_std(r.chi_double_prime_from_kk));
  add_numbers(t, "residual_backward", kUnitNone, to_std(r.residual_backward));
  write_csv_file(out.csv, t);

  if (cfg.svg) {
    // Plot only the evaluated span; the rest of the window is tail support.
    const auto span = [&](const VectorX<double>& v) {
      return std::vector<double>(v.data() + r.first, v.data() + r.last + 1);
    };
    const auto xs = span(s.grid.points());
    write_svg_file(out.with_suffix(".svg"),
                   {{"chi' direct (blue) and from chi'' (orange)", "detuning (rad/s)", "chi'",
                     {{xs, span(s.chi_prime)}, {xs, span(r.chi_prime_from_kk), "#ff7f0e"}}},
                    {"chi'' direct (blue) and from chi' (orange)", "detuning (rad/s)", "chi''",
                     {{xs, span(s.chi_double_prime)}, {xs, span(r.chi_double_prime_from_kk), "#ff7f0e"}}}});
  }

  log << "kk-check: rel_l2_forward=" << format_double(r.rel_l2_forward)
      << " rel_l2_backward=" << format_double(r.rel_l2_backward) << " residual_peaks_forward=";
  const auto peaks = largest_peaks(r.residual_forward, r.first, r.last, 2);
  for (std::size_t k = 0; k < peaks.size(); ++k) log << (k ? ";" : "") << format_double(x[peaks[k]]);
  log << " points=" << s.grid.count << "\n";
  return 0;
}

int run_oracle_compare(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log) {
  std::vector<PumpProbeParamsd> draws;
  if (cfg.random > 0)
    draws = random_probe_draws(cfg.random, cfg.seed);
  else
    draws.push_back(cfg.probe);

  CsvTable t;
  auto& c_draw = t.add("draw", kUnitNone);
  auto& c_gamma = t.add("gamma", kUnitRate);
  auto& c_gba = t.add("gamma_ba", kUnitRate);
  auto& c_rop = t.add("r_op", kUnitRate);
  auto& c_dp = t.add("delta_pump", kUnitRate);
  auto& c_o1 = t.add("omega1", kUnitRate);
  auto& c_delta = t.add("delta", kUnitRate);
  auto& c_cre = t.add("chi_prime_closed", kUnitNone);
  auto& c_cim = t.add("chi_double_prime_closed", kUnitNone);
  auto& c_sre = t.add("chi_prime_solve", kUnitNone);
  auto& c_sim = t.add("chi_double_prime_solve", kUnitNone);
  auto& c_tre = t.add("chi_prime_timedomain", kUnitNone);
  auto& c_tim = t.add("chi_double_prime_timedomain", kUnitNone);
  auto& c_dcs = t.add("rel_dev_closed_solve", kUnitNone);
  auto& c_dst = t.add("rel_dev_solve_timedomain", kUnitNone);
  auto& c_stable = t.add("stable", "text");
  auto& c_status = t.add("status", "text");

  const double nan = std::nan("");
  int n_stable = 0, n_violations = 0, n_nonconverged = 0;
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const auto& p = draws[d];
    const bool stable = response_poles(p).stable;
    const UniformGrid<double> grid =
        cfg.random > 0 ? UniformGrid<double>::symmetric(probe_window(p), cfg.deltas) : cfg.grid;
    const auto td = spread_indices(grid, cfg.td_deltas);
    const bool linear = p.omega1 == 0.0;

    double worst_cs = 0, worst_st = 0, worst_lin = 0;
    int draw_bad = 0, draw_nc = 0;
    for (Eigen::Index i = 0; i < grid.count; ++i) {
      const double delta = grid.point(i);
      std::string status = "ok";
      std::complex<double> closed(nan, nan), solved(nan, nan), timed(nan, nan);
      double dev_cs = nan, dev_st = nan;
      if (!stable) {
        status = "unstable";
      } else {
        try {
          closed = probe_chi_closed(p, delta);
          solved = probe_chi_solve(p, delta).chi;
          dev_cs = relative(closed, solved);
          worst_cs = std::max(worst_cs, dev_cs);
          if (!(dev_cs <= kBoundClosedSolve)) status = "violation";
          if (std::find(td.begin(), td.end(), i) != td.end()) {
            timed = probe_chi_timedomain(p, delta).chi;
            dev_st = relative(timed, solved);
            worst_st = std::max(worst_st, dev_st);
            if (!(dev_st <= kBoundSolveTimeDomain)) status = "violation";
          }
          if (linear) {
            const auto lin = linear_limit_chi(p, delta);
            for (const auto& v : {closed, solved, timed}) {
              if (std::isnan(v.real())) continue;
              const double dev = relative(v, lin);
              worst_lin = std::max(worst_lin, dev);
              if (!(dev <= kBoundLinearLimit)) status = "violation";
            }
          }
        } catch (const NonConvergence& e) {
          status = "nonconvergence";
        } catch (const NumericalError& e) {
          status = "numerical_error";
        }
      }
      if (status == "violation" || status == "numerical_error") ++draw_bad;
      if (status == "nonconvergence") ++draw_nc;

      c_draw.numbers.push_back(double(d));
      c_gamma.numbers.push_back(p.gamma_parallel);
      c_gba.numbers.push_back(p.gamma_ba);
      c_rop.numbers.push_back(p.r_op);
      c_dp.numbers.push_back(p.delta_pump);
      c_o1.numbers.push_back(p.omega1);
      c_delta.numbers.push_back(delta);
      c_cre.numbers.push_back(closed.real());
      c_cim.numbers.push_back(closed.imag());
      c_sre.numbers.push_back(solved.real());
      c_sim.numbers.push_back(solved.imag());
      c_tre.numbers.push_back(timed.real());
      c_tim.numbers.push_back(timed.imag());
      c_dcs.numbers.push_back(dev_cs);
      c_dst.numbers.push_back(dev_st);
      c_stable.text.push_back(stable ? "yes" : "no");
      c_status.text.push_back(status);
    }
    n_stable += stable;
    n_violations += draw_bad;
    n_nonconverged += draw_nc;
    log << "draw " << d << ": " << (stable ? "stable" : "unstable");
    if (stable) {
      log << " max_rel_closed_solve=" << format_double(worst_cs)
          << " max_rel_solve_timedomain=" << format_double(worst_st);
      if (linear) log << " max_rel_linear_limit=" << format_double(worst_lin);
      log << (draw_bad ? " FAIL" : draw_nc ? " NONCONVERGED" : " ok");
    }
    log << "\n";
  }
  write_csv_file(out.csv, t);
  log << "oracle-compare: draws=" << draws.size() << " stable=" << n_stable
      << " violations=" << n_violations << " nonconverged=" << n_nonconverged << "\n";
  return n_violations + n_nonconverged > 0 ? 3 : 0;
}

int run(const EffectiveConfig& cfg, const OutputPaths& out, std::ostream& log) {
  switch (cfg.command) {
    case Command::LaserProfile: return run_laser_profile(cfg, out, log);
    case Command::ProbeSpectrum: return run_probe_spectrum(cfg, out, log);
    case Command::KKCheck: return run_kk_check(cfg, out, log);
    case Command::OracleCompare: return run_oracle_compare(cfg, out, log);
  }
  return 2;
}

}  // namespace lasekk::cli
