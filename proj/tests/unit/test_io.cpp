#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "noteffect/io/archive.hpp"
#include "noteffect/io/cohort_files.hpp"
#include "noteffect/io/csv.hpp"
#include "noteffect/io/ingest.hpp"
#include "noteffect/io/reports.hpp"
#include "noteffect/pipeline/stages.hpp"
#include "noteffect/scm/fit.hpp"
#include "noteffect/util/error.hpp"

using namespace noteffect;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = fs::path(NOTEFFECT_TEST_DATA) / "golden";

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("noteffect_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void copy_golden(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(kGolden))
    if (e.path().extension() == ".csv") fs::copy_file(e.path(), dir / e.path().filename());
}

std::string archive_text(const io::Archive& a) {
  std::ostringstream out;
  io::write_archive(out, a);
  return out.str();
}

}  // namespace

TEST_CASE("parse_csv handles quoting and reports positions") {
  const std::string text = "a,b\n1,\"x, \"\"y\"\"\"\n\n2,\"multi\nline\"\n3,z\n";
  auto t = io::parse_csv(text, "t.csv");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][1] == "x, \"y\"");
  CHECK(t.rows[1][1] == "multi\nline");
  CHECK(t.lines == std::vector<std::size_t>{2, 4, 6});

  constexpr std::array<std::string_view, 1> need = {"c"};
  CHECK_THROWS_AS(io::parse_csv(text, "t.csv", need), io::SchemaError);
  try {
    io::parse_csv("a,b\n1,2\n3\n", "w.csv");
    FAIL("expected a width error");
  } catch (const io::SchemaError& e) {
    CHECK(e.file() == "w.csv");
    CHECK(e.line() == 3);
  }

  double d = 0;
  CHECK(io::parse_double("1e-3", d));
  CHECK(d == 0.001);
  CHECK_FALSE(io::parse_double("1.5x", d));
  CHECK_FALSE(io::parse_double("", d));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / (1 + i);
    REQUIRE(io::parse_double(io::format_double(v), d));
    REQUIRE(d == v);
  }
}

TEST_CASE("ingest of the golden fixture matches the checked-in archive") {
  auto res = io::ingest(io::ingest_paths_in(kGolden));
  const auto expected = io::read_text(kGolden / "expected.archive");
  CHECK(archive_text(res.archive) == expected);

  const auto& a = res.archive;
  REQUIRE(a.cohort.treated.size() == 2);
  REQUIRE(a.cohort.donors.size() == 2);
  CHECK(a.cohort.treated[0].post_id == "p1");
  CHECK(*a.cohort.treated[0].treatment_time - a.cohort.treated[0].created_at == 70 * kMinute);
  // 0, 40 at 20 min, 120 at 60 min: linear between observations.
  CHECK(a.cohort.treated[0].find_series(MetricKind::views)->values[1] == 30.0);
  CHECK(a.cohort.treated[0].labels.at("accuracy_concerns").size() == 2);
  // impressions is read as views
  CHECK(a.cohort.treated[1].find_series(MetricKind::views));
  // Offset timestamps are normalised to UTC.
  CHECK(a.cohort.donors[1].created_at == a.cohort.treated[1].created_at);
  REQUIRE(a.exclusions.size() == 1);
  CHECK(a.exclusions[0].post_id == "p5");
  CHECK(a.exclusions[0].reason == "no proposed note");
  // Every kept post has a cascade entry, possibly empty.
  CHECK(a.reposts.size() == 4);
  CHECK(a.reposts.at("p2").empty());
  CHECK(res.report.rows.at("observations") == 21);
}

TEST_CASE("ingest rejects malformed inputs") {
  SUBCASE("empty observations") {
    auto dir = scratch_dir("empty_obs");
    copy_golden(dir);
    io::write_text(dir / "observations.csv", "post_id,metric,observed_at,value\n");
    try {
      io::ingest(io::ingest_paths_in(dir));
      FAIL("expected no data");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()) == "no data");
    }
  }
  SUBCASE("duplicate post id") {
    auto dir = scratch_dir("dup");
    copy_golden(dir);
    std::ofstream(dir / "posts.csv", std::ios::app) << "p3,2024-03-01T05:00:00Z,1\n";
    try {
      io::ingest(io::ingest_paths_in(dir));
      FAIL("expected a schema error");
    } catch (const io::SchemaError& e) {
      CHECK(std::string(e.what()).find("p3") != std::string::npos);
      CHECK(e.line() == 7);
    }
  }
  SUBCASE("bad timestamp") {
    auto dir = scratch_dir("badtime");
    copy_golden(dir);
    std::ofstream(dir / "reposts.csv", std::ios::app) << "p1,u9,yesterday\n";
    CHECK_THROWS_AS(io::ingest(io::ingest_paths_in(dir)), io::SchemaError);
  }
  SUBCASE("unknown status") {
    auto dir = scratch_dir("status");
    copy_golden(dir);
    std::ofstream(dir / "note_events.csv", std::ios::app) << "p4,n4,maybe,2024-03-01T02:30:00Z,x\n";
    CHECK_THROWS_AS(io::ingest(io::ingest_paths_in(dir)), io::SchemaError);
  }
  SUBCASE("missing column") {
    auto dir = scratch_dir("column");
    copy_golden(dir);
    io::write_text(dir / "posts.csv", "post_id,created_at\np1,2024-03-01T00:00:00Z\n");
    CHECK_THROWS_AS(io::ingest(io::ingest_paths_in(dir)), io::SchemaError);
  }
}

TEST_CASE("archive round trip") {
  auto a = io::ingest(io::ingest_paths_in(kGolden)).archive;
  std::istringstream in(archive_text(a));
  auto b = io::read_archive(in);
  CHECK(a == b);
  CHECK(archive_text(b) == archive_text(a));

  std::istringstream bad("noteffect-archive\t99\n");
  CHECK_THROWS_AS(io::read_archive(bad), DataError);
}

TEST_CASE("simulated files ingest to the simulated archive") {
  sim::SimConfig c;
  c.seed = 8;
  c.graph.user_count = 3000;
  c.treated_count = 6;
  c.donor_count = 30;
  auto cohort = sim::simulate_cohort(c);
  auto dir = scratch_dir("simfiles");
  io::write_cohort_files(dir, cohort);
  auto res = io::ingest(io::ingest_paths_in(dir));
  auto direct = pipeline::archive_from_sim(cohort);
  CHECK(res.archive.cohort == direct.cohort);
  CHECK(res.archive.reposts == direct.reposts);
  CHECK(res.archive.follows == direct.follows);
  CHECK(res.report.rejections.empty());

  auto truth = io::truth_from_json(io::read_text(dir / "ground_truth.json"));
  CHECK(io::truth_to_json(truth) == io::truth_to_json(cohort.truth));
}

TEST_CASE("filter stage") {
  auto clean = [](const std::string& id, std::optional<Millis> t) {
    auto p = test::post(id, t);
    p.series[MetricKind::views] = test::series(MetricKind::views, 0, test::fill(0, 260, [](int k) { return 10.0 * k; }));
    return p;
  };
  io::Archive a;
  a.cohort.treated = {clean("t1", 4 * kHour), clean("t2", 5 * kHour)};
  a.cohort.donors = {clean("d1", {}), clean("d2", {}), clean("d3", {})};
  pipeline::PipelineConfig cfg;

  SUBCASE("clean fixture is unchanged") {
    auto before = a.cohort;
    auto r = pipeline::filter_stage(a, cfg);
    CHECK(a.cohort == before);
    CHECK(r.exclusions.empty());
    CHECK(r.warnings.empty());
  }
  SUBCASE("one spike-dip post is removed") {
    auto& v = a.cohort.donors[1].series[MetricKind::views].values;
    v[20] += 500;  // up at step 20, back down at step 21
    auto r = pipeline::filter_stage(a, cfg);
    CHECK(a.cohort.donors.size() == 2);
    REQUIRE(r.exclusions.size() == 1);
    CHECK(r.exclusions[0].post_id == "d2");
    REQUIRE(r.anomalies.size() == 1);
    CHECK(r.anomalies[0].second[0].first == MetricKind::views);
    CHECK(a.exclusions.size() == 1);
    CHECK(pipeline::filter_report_to_json(r).find("\"d2\"") != std::string::npos);
  }
  SUBCASE("all treated anomalous leaves a warning") {
    for (auto& p : a.cohort.treated) p.series[MetricKind::views].values[10] += 1000;
    auto r = pipeline::filter_stage(a, cfg);
    CHECK(a.cohort.treated.empty());
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("treated post without pre-treatment coverage") {
    a.cohort.treated[0].series[MetricKind::views] =
        test::series(MetricKind::views, 14, test::fill(14, 260, [](int k) { return 10.0 * k; }));
    auto r = pipeline::filter_stage(a, cfg);
    CHECK(a.cohort.treated.size() == 1);
    CHECK(r.exclusions.size() == 1);
  }
}

TEST_CASE("config JSON") {
  auto c = pipeline::config_from_json(R"({"donor_pool_size": 50, "workers": 2})", pipeline::PipelineConfig{});
  CHECK(c.donor_pool_size == 50);
  CHECK(c.workers == 2);
  auto again = pipeline::config_from_json(pipeline::config_to_json(c), pipeline::PipelineConfig{});
  CHECK(pipeline::config_to_json(again) == pipeline::config_to_json(c));
  CHECK_THROWS_AS(pipeline::config_from_json(R"({"donor_pool": 50})"), ConfigError);
  CHECK_THROWS_AS(pipeline::config_from_json(R"({"grid_step_minutes": 1})"), ConfigError);
  CHECK_THROWS_AS(pipeline::config_from_json("[1,2]"), ConfigError);

  auto s = io::sim_config_from_json(R"({"seed": 5, "treated_count": 3})");
  CHECK(s.seed == 5);
  CHECK(s.treated_count == 3);
  CHECK(s.donor_count == sim::SimConfig{}.donor_count);
}

namespace {

io::Archive small_sim_archive(std::uint64_t seed) {
  sim::SimConfig c;
  c.seed = seed;
  c.graph.user_count = 4000;
  c.treated_count = 12;
  c.donor_count = 150;
  auto a = pipeline::archive_from_sim(sim::simulate_cohort(c));
  pipeline::PipelineConfig cfg;
  pipeline::filter_stage(a, cfg);
  pipeline::cascade_stage(a, 1);
  return a;
}

}  // namespace

TEST_CASE("fits and effects reports round trip and do not depend on workers") {
  auto a = small_sim_archive(21);
  pipeline::PipelineConfig cfg;
  cfg.workers = 1;
  auto fits = pipeline::fit_stage(a, cfg);
  REQUIRE(fits.feasible_count() > 0);
  cfg.workers = 3;
  auto fits3 = pipeline::fit_stage(a, cfg);
  const auto text = io::fits_to_json(fits);
  CHECK(io::fits_to_json(fits3) == text);
  CHECK(io::fits_to_json(io::fits_from_json(text)) == text);
  CHECK_THROWS_AS(io::fits_from_json(R"({"schema": "other/1"})"), DataError);

  auto eff = pipeline::effects_stage(a, fits, cfg);
  auto eff_read = pipeline::effects_stage(a, io::fits_from_json(text), cfg);
  const auto etext = io::effects_to_json(eff);
  CHECK(io::effects_to_json(eff_read) == etext);
  CHECK(io::effects_to_json(io::effects_from_json(etext)) == etext);
}

TEST_CASE("weights are invariant to rescaling a metric") {
  auto a = small_sim_archive(22);
  pipeline::PipelineConfig cfg;
  cfg.metrics = {MetricKind::views, MetricKind::likes};
  cfg.bias_correction = false;
  auto base = pipeline::fit_stage(a, cfg);
  auto scaled = a;
  for (auto* list : {&scaled.cohort.treated, &scaled.cohort.donors})
    for (auto& p : *list)
      for (double& v : p.series.at(MetricKind::views).values) v *= 1000.0;
  auto refit = pipeline::fit_stage(scaled, cfg);
  REQUIRE(base.fits.size() == refit.fits.size());
  for (std::size_t i = 0; i < base.fits.size(); ++i) {
    REQUIRE(base.fits[i].status == refit.fits[i].status);
    if (base.fits[i].status != FitStatus::ok) continue;
    const auto& w0 = base.fits[i].weights.weights;
    const auto& w1 = refit.fits[i].weights.weights;
    REQUIRE(w0.size() == w1.size());
    for (std::size_t j = 0; j < w0.size(); ++j) CHECK(std::abs(w0[j] - w1[j]) <= 1e-6);
  }
}

#ifdef NOTEFFECT_CLI
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NOTEFFECT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  auto dir = scratch_dir("cli");
  const auto arch = (dir / "a.archive").string();
  CHECK(run_cli("ingest --dir " + kGolden.string() + " --out " + arch) == 0);
  CHECK(fs::exists(arch));
  CHECK(run_cli("filter --archive " + arch + " --out " + arch) == 0);
  CHECK(run_cli("bogus") == 1);
  CHECK(run_cli("fit") == 1);
  io::write_text(dir / "bad.json", R"({"no_such_key": 1})");
  CHECK(run_cli("fit --archive " + arch + " --out " + (dir / "f.json").string() + " --config " +
                (dir / "bad.json").string()) == 1);

  copy_golden(dir);
  std::ofstream(dir / "posts.csv", std::ios::app) << "p9,not-a-time,1\n";
  CHECK(run_cli("ingest --dir " + dir.string() + " --out " + (dir / "b.archive").string()) == 2);

  io::Archive donors_only = io::load_archive(arch);
  donors_only.cohort.treated.clear();
  io::save_archive(dir / "d.archive", donors_only);
  CHECK(run_cli("fit --archive " + (dir / "d.archive").string() + " --out " + (dir / "f.json").string()) == 3);
}
#endif
