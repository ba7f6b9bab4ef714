#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lasekk/cli_io/commands.hpp"
#include "lasekk/cli_io/config.hpp"
#include "lasekk/cli_io/csv.hpp"
#include "lasekk/cli_io/svg.hpp"
#include "lasekk/kk_transform.hpp"
#include "support.hpp"

using namespace lasekk;
using namespace lasekk::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lasekk_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" LASE_KK_BIN "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string run_to_string(Command c, const Settings& s, const fs::path& csv) {
  std::ostringstream log;
  run(resolve(c, s), OutputPaths{csv.string()}, log);
  return log.str();
}

}  // namespace

TEST_CASE("property: number formatting round-trips every binary64") {
  testing::Gen gen(1);
  std::mt19937_64 bits(2);
  for (int k = 0; k < 20000; ++k) {
    double v;
    if (k % 2) {
      const std::uint64_t b = bits();
      std::memcpy(&v, &b, sizeof v);
      if (!std::isfinite(v)) continue;
    } else {
      v = gen.uniform(-1, 1) * std::pow(10.0, gen.uniform(-300, 300));
    }
    const auto text = format_double(v);
    CHECK(text.find(',') == std::string::npos);
    CHECK(parse_double(text, "x") == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5e-12) == "-2.5e-12");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK_THROWS_AS(parse_double("1.0x", "x"), ValidationError);
  CHECK_THROWS_AS(parse_double("", "x"), ValidationError);
}

TEST_CASE("settings parser: comments, blanks and errors") {
  const auto s = parse_settings("# header\n\npreset = fig4b   # trailing\nomega1=1e8\n  r_op =  0 \n");
  CHECK(s.at("preset") == "fig4b");
  CHECK(s.at("omega1") == "1e8");
  CHECK(s.at("r_op") == "0");
  CHECK(s.size() == 3);
  CHECK_THROWS_AS(parse_settings("bogus = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_settings("omega1 = 1\nomega1 = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_settings("omega1 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_settings("omega1 =\n"), ValidationError);
}

TEST_CASE("merge: overrides replace preset fields one at a time") {
  const auto base = resolve(Command::ProbeSpectrum, {{"preset", "fig4c"}});
  const auto over = resolve(Command::ProbeSpectrum, {{"preset", "fig4c"}, {"r_op", "123"}});
  CHECK(over.probe.r_op == 123);
  CHECK(over.probe.omega1 == base.probe.omega1);
  CHECK(over.probe.delta_pump == base.probe.delta_pump);
  CHECK(over.probe.gamma_ba == base.probe.gamma_ba);

  const auto laser = resolve(Command::LaserProfile, {{"q", "1e8"}});
  CHECK(laser.gq == 3);
  CHECK(laser.medium.gain_g == doctest::Approx(3e-8).epsilon(1e-15));
  const auto sub = resolve(Command::LaserProfile, {{"gq", "0.5"}});
  CHECK_FALSE(lasing_band(sub.medium, sub.cavity));
}

TEST_CASE("merge: default grids") {
  const auto l = resolve(Command::LaserProfile, {});
  CHECK(l.grid.count == 4001);
  CHECK(testing::rel(l.grid.hi, 3 * l.medium.gamma_medium) < 1e-15);
  const auto p = resolve(Command::ProbeSpectrum, {{"preset", "fig4a"}});
  CHECK(p.grid.count == 4096);
  CHECK(testing::rel(p.grid.hi, 5 * effective_rabi(p.probe)) < 1e-15);
  const auto k = resolve(Command::KKCheck, {{"preset", "fig4a"}});
  CHECK(k.grid.count == 16384);
  CHECK(testing::rel(k.grid.hi, 100 * k.probe.eta()) < 1e-15);
  const auto k1 = resolve(Command::KKCheck, {{"preset", "fig1"}});
  CHECK(testing::rel(k1.grid.hi, 10 * k1.medium.gamma_medium) < 1e-15);
  const auto g = resolve(Command::ProbeSpectrum, {{"grid_min", "-1e8"}, {"grid_max", "2e8"}, {"grid_n", "100"}});
  CHECK(g.grid.lo == -1e8);
  CHECK(g.grid.hi == 2e8);
  CHECK(g.grid.count == 100);
}

TEST_CASE("merge: invalid combinations are validation errors") {
  CHECK_THROWS_AS(resolve(Command::LaserProfile, {{"preset", "fig4a"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"preset", "fig1"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"preset", "fig9"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"q", "10"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::LaserProfile, {{"omega1", "10"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"gamma", "-1"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"grid_n", "1"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"grid_min", "5"}, {"grid_max", "1"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::ProbeSpectrum, {{"deltas", "4"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::KKCheck, {{"tail_chi_prime", "3"}}), ValidationError);
  CHECK_THROWS_AS(resolve(Command::KKCheck, {{"input", "x.csv"}, {"preset", "fig4a"}}), ValidationError);
}

TEST_CASE("config round-trip: serialized effective config reproduces the outputs byte for byte") {
  const auto dir = scratch("roundtrip");
  const std::vector<std::pair<Command, Settings>> cases = {
      {Command::LaserProfile, {{"preset", "fig1"}, {"gq", "2.5"}, {"svg", "true"}}},
      {Command::ProbeSpectrum, {{"preset", "fig4d"}, {"omega1", "3.3e8"}, {"oracles", "true"}, {"grid_n", "512"}}},
      {Command::KKCheck, {{"preset", "fig4b"}, {"grid_n", "4096"}}},
      {Command::OracleCompare, {{"random", "3"}, {"seed", "9"}, {"deltas", "8"}}},
  };
  int k = 0;
  for (const auto& [cmd, settings] : cases) {
    const auto cfg = resolve(cmd, settings);
    const auto text = serialize(cfg);
    const auto again = resolve(cmd, parse_settings(text));
    CHECK(serialize(again) == text);

    const auto a = dir / ("a" + std::to_string(k) + ".csv");
    const auto b = dir / ("b" + std::to_string(k) + ".csv");
    std::ostringstream la, lb;
    run(cfg, OutputPaths{a.string()}, la);
    run(again, OutputPaths{b.string()}, lb);
    CHECK(slurp(a) == slurp(b));
    CHECK(la.str() == lb.str());
    ++k;
  }
}

TEST_CASE("CSV headers carry names and units") {
  const auto dir = scratch("headers");
  run_to_string(Command::LaserProfile, {}, dir / "l.csv");
  CHECK(first_line(dir / "l.csv") ==
        "detuning[rad_per_s],chi_prime[dimensionless],chi_double_prime[dimensionless],omega_sq[rad2_per_s2]");
  run_to_string(Command::ProbeSpectrum, {{"oracles", "true"}}, dir / "p.csv");
  CHECK(first_line(dir / "p.csv") ==
        "delta[rad_per_s],chi_prime[dimensionless],chi_double_prime[dimensionless],"
        "chi_prime_solve[dimensionless],chi_double_prime_solve[dimensionless],rel_dev_closed_solve[dimensionless]");
  run_to_string(Command::KKCheck, {{"grid_n", "2048"}}, dir / "k.csv");
  CHECK(first_line(dir / "k.csv") ==
        "detuning[rad_per_s],chi_prime[dimensionless],chi_prime_kk[dimensionless],residual_forward[dimensionless],"
        "chi_double_prime[dimensionless],chi_double_prime_kk[dimensionless],residual_backward[dimensionless]");
}

TEST_CASE("laser-profile: plateau, kink report and three-panel SVG") {
  const auto dir = scratch("laser");
  const auto log = run_to_string(Command::LaserProfile, {{"svg", "true"}}, dir / "fig1.csv");
  CHECK(log.find("kinks_chi_prime=2 kinks_chi_double_prime=2") != std::string::npos);

  const auto s = read_spectrum_csv((dir / "fig1.csv").string());
  const double q = 3.8e8;
  const double hw = 2 * std::numbers::pi * 1e9 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < s.grid.count; ++i) {
    const double x = s.grid.point(i);
    if (std::abs(x) < hw * 0.999) CHECK(s.chi_double_prime(i) == -1 / q);
    if (std::abs(x) > hw * 1.001) CHECK(s.chi_double_prime(i) > -1 / q);
  }
  CHECK(count(slurp(dir / "fig1_kinks.csv"), "\n") == 5);

  const auto svg = slurp(dir / "fig1.svg");
  CHECK(count(svg, "<polyline") == 3);
  CHECK(svg.find("viewBox=\"0 0 800 1800\"") != std::string::npos);
}

TEST_CASE("laser-profile below threshold: plain Lorentzian and empty kink report") {
  const auto dir = scratch("sub");
  const auto log = run_to_string(Command::LaserProfile, {{"gq", "0.5"}}, dir / "sub.csv");
  CHECK(log.find("no lasing") != std::string::npos);
  CHECK(count(slurp(dir / "sub_kinks.csv"), "\n") == 1);
  const auto s = read_spectrum_csv((dir / "sub.csv").string());
  const auto cfg = resolve(Command::LaserProfile, {{"gq", "0.5"}});
  for (Eigen::Index i = 0; i < s.grid.count; i += 97) {
    const auto u = susceptibility(cfg.medium, s.grid.point(i), 0.0);
    CHECK(s.chi_double_prime(i) == u.chi_double_prime);
  }
}

TEST_CASE("probe-spectrum oracles column stays below 1e-10") {
  const auto dir = scratch("probe");
  run_to_string(Command::ProbeSpectrum, {{"preset", "fig4a"}, {"oracles", "true"}}, dir / "p.csv");
  std::ifstream f(dir / "p.csv");
  std::string line;
  std::getline(f, line);
  double worst = 0;
  while (std::getline(f, line)) worst = std::max(worst, parse_double(line.substr(line.rfind(',') + 1), "dev"));
  CHECK(worst < 1e-10);
}

TEST_CASE("kk-check reads a Lorentzian fixture written to disk") {
  const auto dir = scratch("fixture");
  const auto s = lorentzian_pair(1e7, UniformGrid<double>::symmetric(1e9, 8192));
  write_csv_file((dir / "lorentzian.csv").string(), spectrum_table(s, "detuning"));
  const auto back = read_spectrum_csv((dir / "lorentzian.csv").string());
  CHECK(back.grid.count == s.grid.count);
  CHECK((back.chi_prime - s.chi_prime).cwiseAbs().maxCoeff() == 0.0);

  const auto log = run_to_string(Command::KKCheck, {{"input", (dir / "lorentzian.csv").string()}}, dir / "kk.csv");
  const auto fwd = parse_double(log.substr(log.find("rel_l2_forward=") + 15, log.find(' ', log.find("rel_l2_forward=")) - log.find("rel_l2_forward=") - 15), "fwd");
  const auto bpos = log.find("rel_l2_backward=") + 16;
  const auto bwd = parse_double(log.substr(bpos, log.find(' ', bpos) - bpos), "bwd");
  CHECK(fwd < 1e-3);
  CHECK(bwd < 1e-3);
}

TEST_CASE("spectrum reader rejects malformed input") {
  const auto dir = scratch("bad");
  {
    std::ofstream f(dir / "nonuniform.csv");
    f << "delta[rad_per_s],chi_prime[dimensionless],chi_double_prime[dimensionless]\n";
    for (int i = 0; i < 100; ++i) f << i * i << ",0,0\n";
  }
  CHECK_THROWS_AS(read_spectrum_csv((dir / "nonuniform.csv").string()), ValidationError);
  {
    std::ofstream f(dir / "nocol.csv");
    f << "delta,chi_prime\n1,2\n";
  }
  CHECK_THROWS_AS(read_spectrum_csv((dir / "nocol.csv").string()), ValidationError);
  CHECK_THROWS_AS(read_spectrum_csv((dir / "missing.csv").string()), ValidationError);
}

TEST_CASE("SVG renderer: one polyline per series, panels stacked") {
  const std::vector<double> x{0, 1, 2}, y{1, NAN, 3};
  const auto svg = render_svg({{"a", "x", "y", {{x, y}, {x, x}}}, {"b", "x", "y", {{x, x}}}});
  CHECK(count(svg, "<polyline") == 3);
  CHECK(svg.find("viewBox=\"0 0 800 1200\"") != std::string::npos);
}

TEST_CASE("random draws are reproducible and inside the documented ranges") {
  const auto a = random_probe_draws(50, 7);
  const auto b = random_probe_draws(50, 7);
  const auto c = random_probe_draws(50, 8);
  CHECK(a.size() == 50);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].gamma_parallel == b[k].gamma_parallel);
    CHECK(a[k].omega1 == b[k].omega1);
    differs |= a[k].gamma_ba != c[k].gamma_ba;
    for (double r : {a[k].gamma_parallel, a[k].gamma_ba, a[k].r_op}) {
      CHECK(r >= 1e5);
      CHECK(r <= 1e9);
    }
    CHECK(a[k].omega1 <= 10 * a[k].eta());
    CHECK(std::abs(a[k].delta_pump) <= 5 * a[k].eta());
  }
  CHECK(differs);
}

TEST_CASE("spread_indices avoids zero detuning") {
  const auto grid = UniformGrid<double>::symmetric(1.0, 33);
  for (int k = 1; k <= 9; ++k)
    for (auto i : spread_indices(grid, k)) CHECK(grid.point(i) != 0.0);
  CHECK(spread_indices(UniformGrid<double>::symmetric(1.0, 32), 5).size() == 5);
}

TEST_CASE("binary: exit codes") {
  const auto dir = scratch("exit");
  const std::string out = " --out " + (dir / "o.csv").string();
  CHECK(run_cli("laser-profile" + out) == 0);
  CHECK(run_cli("probe-spectrum --preset fig4b" + out) == 0);
  CHECK(run_cli("probe-spectrum --preset nope" + out) == 2);
  CHECK(run_cli("probe-spectrum --grid-n 1" + out) == 2);
  CHECK(run_cli("probe-spectrum --gamma abc" + out) == 2);
  CHECK(run_cli("laser-profile --omega1 3" + out) == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("--help") == 0);

  // oscillating spectrum: tail model cannot fit, numerical failure
  {
    std::ofstream f(dir / "wavy.csv");
    f << "delta[rad_per_s],chi_prime[dimensionless],chi_double_prime[dimensionless]\n";
    for (int i = 0; i < 2048; ++i) {
      const double x = -100 + 200.0 * i / 2047;
      f << format_double(x) << "," << format_double(std::cos(0.7 * x)) << "," << format_double(std::sin(0.7 * x))
        << "\n";
    }
  }
  CHECK(run_cli("kk-check --input " + (dir / "wavy.csv").string() + out) == 3);
}

TEST_CASE("binary: relative outputs land in LASE_KK_OUT_DIR") {
  const auto dir = scratch("envdir");
  CHECK(run_cli("probe-spectrum --preset fig4c --grid-n 256 --svg --out rel.csv",
                "LASE_KK_OUT_DIR=" + dir.string()) == 0);
  CHECK(fs::exists(dir / "rel.csv"));
  CHECK(fs::exists(dir / "rel.svg"));
}

TEST_CASE("binary: every subcommand is byte-deterministic and --write-config replays it") {
  const auto dir = scratch("determinism");
  const std::vector<std::string> runs = {
      "laser-profile --preset fig1 --svg",
      "probe-spectrum --preset fig4d --oracles --svg",
      "kk-check --preset fig4a --grid-n 4096 --svg",
      "oracle-compare --random 4 --seed 7 --deltas 8",
  };
  int k = 0;
  for (const auto& args : runs) {
    const auto a = dir / ("a" + std::to_string(k) + ".csv");
    const auto b = dir / ("b" + std::to_string(k) + ".csv");
    const auto c = dir / ("c" + std::to_string(k) + ".csv");
    const auto cfg = dir / ("cfg" + std::to_string(k) + ".txt");
    CHECK(run_cli(args + " --out " + a.string() + " --write-config " + cfg.string()) == 0);
    CHECK(run_cli(args + " --out " + b.string()) == 0);
    const std::string sub = args.substr(0, args.find(' '));
    CHECK(run_cli(sub + " --config " + cfg.string() + " --out " + c.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
    if (args.find("--svg") != std::string::npos) {
      fs::path sa = a, sb = b;
      CHECK(slurp(sa.replace_extension(".svg")) == slurp(sb.replace_extension(".svg")));
    }
    ++k;
  }
}
