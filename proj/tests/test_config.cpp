#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "dls/config.hpp"
#include "dls/errors.hpp"
#include "dls/experiments.hpp"

using namespace dls;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("empty file gives the full default parameter set") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.experiment == Experiment::fig5);
  CHECK(c.lorentzian.g1 == 1.2e5);
  CHECK(c.lorentzian.gamma1_hz == 30e6);
  CHECK(c.lorentzian.gamma2_hz == 10e6);
  CHECK(c.lorentzian.n1 == 9e6);
  CHECK(c.lorentzian.n2 == 1e11);
  CHECK(c.cavity.q == 1e6);
  CHECK(c.output.precision == 12);
  CHECK(c.sweep.inv_ng_points == 40);

  const DualMediumParams d = lorentzian_from(c);
  const DualMediumParams f = fig5_medium();
  CHECK(d.G1 == f.G1);
  CHECK(d.medium1.gamma == f.medium1.gamma);
  CHECK(d.medium2.gamma == f.medium2.gamma);
}

TEST_CASE("sections, comments and lists") {
  const auto c = parse_config(
      "experiment = fig7\n"
      "; comment\n"
      "# another\n"
      "[cavity]\n"
      "q = 2.5e6\n"
      "[sweep]\n"
      "delta_p_hz = 1, 10 ,100\n"
      "custom_model = linear\n");
  CHECK(c.experiment == Experiment::fig7);
  CHECK(c.cavity.q == 2.5e6);
  CHECK(c.sweep.delta_p_hz == std::vector<double>{1, 10, 100});
  CHECK(c.sweep.custom_model == "linear");
}

TEST_CASE("unknown keys and sections are rejected with their location") {
  std::string m = message_of("[cavity]\nq = 1e6\nqq = 3\n");
  CHECK(m.find("line 3") != std::string::npos);
  CHECK(m.find("cavity.qq") != std::string::npos);
  m = message_of("\n[caviti]\nq = 1\n");
  CHECK(m.find("caviti") != std::string::npos);
  m = message_of("colour = red\n");
  CHECK(m.find("line 1") != std::string::npos);
  CHECK(m.find("colour") != std::string::npos);
}

TEST_CASE("syntax and value errors carry line numbers") {
  CHECK(message_of("[cavity]\nq 1e6\n").find("line 2") != std::string::npos);
  CHECK(message_of("[cavity]\nq = 1e6\nq = 2e6\n").find("line") != std::string::npos);
  const std::string m = message_of("[cavity]\n\nq = fast\n");
  CHECK(m.find("line 3") != std::string::npos);
  CHECK(m.find("fast") != std::string::npos);
  CHECK(message_of("[cavity]\nq = nan\n") != "");
  CHECK(message_of("experiment = fig9\n").find("fig9") != std::string::npos);
}

TEST_CASE("validation names the offending field") {
  CHECK(message_of("[cavity]\nq = -1e6\n").find("cavity.q") != std::string::npos);
  CHECK(message_of("[solver]\nrelaxation = 1.5\n").find("solver.relaxation") != std::string::npos);
  CHECK(message_of("[sweep]\nsub_inv_ng_max = 1\n").find("sweep.sub_inv_ng_max") != std::string::npos);
  CHECK(message_of("[sweep]\ndelta_p_hz = 1, 0\n").find("sweep.delta_p_hz") != std::string::npos);
  CHECK(message_of("[appendix]\nreflectivity = 1\n").find("appendix.reflectivity") != std::string::npos);
  CHECK(message_of("[output]\nprecision = 30\n").find("output.precision") != std::string::npos);
}

TEST_CASE("write then reload is bit-identical") {
  ExperimentConfig c;
  c.experiment = Experiment::custom_sweep;
  c.cavity.q = 1.0 / 3.0 * 1e7;
  c.lorentzian.gamma1_hz = 30e6 * (1 + 1e-15);
  c.subluminal.gamma_hz = 1e6 / kTwoPi;
  c.oracle.pump_lock_offset_hz = -0.1;
  c.sweep.delta_p_hz = {0.1, 1.0 / 7.0, 6.02214076e23};
  c.output.dir = "some/where";
  const std::string text = format_config(c);
  const ExperimentConfig r = parse_config(text);
  CHECK(format_config(r) == text);
  CHECK(r.experiment == c.experiment);
  CHECK(same_bits(r.cavity.q, c.cavity.q));
  CHECK(same_bits(r.lorentzian.gamma1_hz, c.lorentzian.gamma1_hz));
  CHECK(same_bits(r.subluminal.gamma_hz, c.subluminal.gamma_hz));
  CHECK(same_bits(r.oracle.pump_lock_offset_hz, c.oracle.pump_lock_offset_hz));
  REQUIRE(r.sweep.delta_p_hz.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(same_bits(r.sweep.delta_p_hz[i], c.sweep.delta_p_hz[i]));
  CHECK(r.output.dir == "some/where");
  // the 2 pi conversion happens once, after loading
  CHECK(lorentzian_from(r).medium1.gamma == hz_to_rad(c.lorentzian.gamma1_hz));
}

TEST_CASE("load from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "dls_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.ini";
  {
    std::ofstream(path) << "experiment = fig8\n";
  }
  CHECK(load_config(path.string()).experiment == Experiment::fig8);
  try {
    load_config((dir / "missing.ini").string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  {
    std::ofstream(path) << "[cavity]\nq = 0\n";
  }
  try {
    load_config(path.string());
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("c.ini") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"fig4_sub", "fig4_super", "fig5", "fig6", "fig7", "fig8", "custom_sweep"}) {
    const auto path = std::filesystem::path(DLS_SOURCE_DIR) / "configs" / (std::string(name) + ".ini");
    CAPTURE(path.string());
    const ExperimentConfig c = load_config(path.string());
    CHECK(experiment_name(c.experiment) == std::string(name));
  }
}
