#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "corot/config.hpp"
#include "corot/evolve.hpp"
#include "corot/io.hpp"

using namespace corot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("corot_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("slice round trip at 15 significant digits") {
  TempDir tmp;
  Slice s;
  s.t = 0.375;
  s.alpha = 1.0;
  s.k = 1;
  s.grid = RadialGrid::make(65, 2.0);
  s.v.resize(65);
  s.pi.resize(65);
  s.gamma.resize(65);
  s.omega.resize(65);
  for (int i = 0; i < 65; ++i) {
    const double r = s.grid.r(i);
    s.v[i] = 0.3 * std::exp(-r * r);
    s.pi[i] = -0.1 * r * std::exp(-r);
    s.gamma[i] = 0.01 * r * r;
    s.omega[i] = -0.02 * r * r;
  }
  write_slice(tmp.path / "s.dat", s);
  const Slice t = read_slice(tmp.path / "s.dat");
  CHECK(t.t == doctest::Approx(s.t).epsilon(1e-14));
  CHECK(t.k == s.k);
  CHECK(t.grid.n_points == s.grid.n_points);
  for (int i = 0; i < 65; ++i) {
    CHECK(t.v[i] == doctest::Approx(s.v[i]).epsilon(1e-14));
    CHECK(t.pi[i] == doctest::Approx(s.pi[i]).epsilon(1e-14));
    CHECK(t.gamma[i] == doctest::Approx(s.gamma[i]).epsilon(1e-14));
    CHECK(t.omega[i] == doctest::Approx(s.omega[i]).epsilon(1e-14));
  }
}

TEST_CASE("config parsing, overrides, and line-numbered errors") {
  const std::string text =
      "[grid]\n"
      "n = 129\n"
      "r_max = 2.5\n"
      "\n"
      "[matter]            # comment\n"
      "alpha = 0.5\n"
      "family = compact_bump\n"
      "amplitude = 0.3\n"
      "[target]\n"
      "name = sphere\n";
  RunConfig cfg = RunConfig::from_string(text);
  CHECK(cfg.get_int_or("grid.n", 0) == 129);
  CHECK(cfg.get_double("matter.alpha") == doctest::Approx(0.5));
  cfg.apply_override("grid.n=257");
  CHECK(cfg.get_int_or("grid.n", 0) == 257);

  const EvolutionConfig ec = cfg.evolution();
  CHECK(ec.target.name == "sphere");
  CHECK(ec.grid.n_points == 257);

  // missing target name is reported with the key
  RunConfig bare = RunConfig::from_string("[grid]\nn = 65\n");
  try {
    (void)bare.evolution();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("target.name") != std::string::npos);
  }

  // parse errors carry line numbers
  try {
    (void)RunConfig::from_string("[grid]\nnonsense line\n", "test.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
  }
}

TEST_CASE("history write/read and byte-identical determinism") {
  TempDir tmp;
  EvolutionConfig ec;
  ec.grid = RadialGrid::make(65, 2.0);
  ec.t_end = 0.3;
  ec.alpha = 1.0;
  ec.k = 1;
  ec.target = make_flat_target();
  ec.store_dt = 0.1;
  InitialDataSpec sp;
  sp.family = InitialDataSpec::Family::CompactBump;
  sp.amplitude = 0.3;
  sp.center = 0.5;
  sp.width = 0.4;

  const auto rr1 = run(ec, sp);
  const auto rr2 = run(ec, sp);
  write_history(tmp.path / "a", rr1.history);
  write_history(tmp.path / "b", rr2.history);
  for (int i = 0; i < rr1.history.size(); ++i) {
    std::ifstream fa(tmp.path / "a" / slice_filename(i));
    std::ifstream fb(tmp.path / "b" / slice_filename(i));
    std::string sa((std::istreambuf_iterator<char>(fa)), {});
    std::string sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }

  const History h = read_history(tmp.path / "a");
  CHECK(h.size() == rr1.history.size());
  CHECK(h.back().t == doctest::Approx(0.3).epsilon(1e-12));
}
