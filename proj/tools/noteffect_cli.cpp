// noteffect: batch pipeline over note-effect cohorts.
//
//   noteffect simulate --config sim.json --out data/
//   noteffect ingest   --dir data/ --out cohort.archive
//   noteffect filter   --archive cohort.archive --out filtered.archive
//   noteffect cascades --archive filtered.archive --out cascades.archive
//   noteffect fit      --archive cascades.archive --out fits.json
//   noteffect effects  --archive cascades.archive --fits fits.json --out effects.json
//   noteffect placebo  --archive cascades.archive --out placebo.json
//   noteffect validate --effects effects.json --truth data/ground_truth.json --out recovery.json
//
// Exit codes: 0 success, 1 usage, 2 schema violation, 3 infeasible stage.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "noteffect/io/archive.hpp"
#include "noteffect/io/cohort_files.hpp"
#include "noteffect/io/ingest.hpp"
#include "noteffect/io/plot_data.hpp"
#include "noteffect/io/reports.hpp"
#include "noteffect/pipeline/stages.hpp"
#include "noteffect/pipeline/validate.hpp"
#include "noteffect/util/error.hpp"
#include "noteffect/util/parallel.hpp"

namespace fs = std::filesystem;
using namespace noteffect;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kSchema = 2, kInfeasible = 3 };

struct Common {
  std::string config_path;
  std::optional<unsigned> workers;

  pipeline::PipelineConfig config() const {
    auto c = pipeline::default_config();
    if (!config_path.empty()) c = pipeline::config_from_json(io::read_text(config_path), c);
    if (workers) c.workers = *workers;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON file overriding pipeline settings")
      ->check(CLI::ExistingFile);
  cmd->add_option("--workers", common.workers, "worker threads (default NOTEFFECT_WORKERS)")
      ->check(CLI::PositiveNumber);
}

void note(const std::string& msg) { std::cerr << msg << '\n'; }

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_text(path, text);
}

std::string ingest_report_json(const io::IngestReport& r, const io::Archive& a) {
  nlohmann::ordered_json j;
  j["rows"] = r.rows;
  j["treated"] = a.cohort.treated.size();
  j["donors"] = a.cohort.donors.size();
  j["rejections"] = r.rejections;
  j["warnings"] = r.warnings;
  return j.dump(1) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effects of displayed fact-check notes on post engagement"};
  app.require_subcommand(1);
  Common common;

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "validate and align input files into an archive");
  std::string in_dir, out_path, report_path;
  io::IngestPaths paths;
  ingest_cmd->add_option("--dir", in_dir, "directory with the conventional file names")
      ->check(CLI::ExistingDirectory);
  ingest_cmd->add_option("--posts", paths.posts);
  ingest_cmd->add_option("--observations", paths.observations);
  ingest_cmd->add_option("--note-events", paths.note_events);
  ingest_cmd->add_option("--labels", paths.labels);
  ingest_cmd->add_option("--reposts", paths.reposts);
  ingest_cmd->add_option("--follows", paths.follows);
  ingest_cmd->add_option("--out", out_path, "archive file")->required();
  ingest_cmd->add_option("--report", report_path, "row counts and rejections (JSON)");

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "drop anomalous and ineligible posts");
  std::string archive_path;
  filter_cmd->add_option("--archive", archive_path)->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--out", out_path)->required();
  filter_cmd->add_option("--report", report_path, "exclusion report (JSON)");
  add_common(filter_cmd, common);

  // cascades
  auto* cascades_cmd = app.add_subcommand("cascades", "reconstruct cascades and add their metric series");
  cascades_cmd->add_option("--archive", archive_path)->required()->check(CLI::ExistingFile);
  cascades_cmd->add_option("--out", out_path)->required();
  add_common(cascades_cmd, common);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit synthetic controls for every treated post");
  bool with_coefficients = false;
  fit_cmd->add_option("--archive", archive_path)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", out_path)->required();
  fit_cmd->add_flag("--bias-coefficients", with_coefficients, "store bias-model coefficients");
  add_common(fit_cmd, common);

  // effects
  auto* effects_cmd = app.add_subcommand("effects", "aggregate fits into the effect report");
  std::string fits_path, plot_dir;
  effects_cmd->add_option("--archive", archive_path)->required()->check(CLI::ExistingFile);
  effects_cmd->add_option("--fits", fits_path)->required()->check(CLI::ExistingFile);
  effects_cmd->add_option("--out", out_path)->required();
  effects_cmd->add_option("--plot-dir", plot_dir, "plot-data directory (default: output_dir)");
  add_common(effects_cmd, common);

  // placebo
  auto* placebo_cmd = app.add_subcommand("placebo", "backdated in-time placebo test");
  placebo_cmd->add_option("--archive", archive_path)->required()->check(CLI::ExistingFile);
  placebo_cmd->add_option("--out", out_path)->required();
  add_common(placebo_cmd, common);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "write a simulated cohort and its ground truth");
  std::string sim_config_path;
  std::optional<std::uint64_t> seed;
  simulate_cmd->add_option("--config", sim_config_path, "simulation settings (JSON)")
      ->check(CLI::ExistingFile);
  simulate_cmd->add_option("--seed", seed);
  simulate_cmd->add_option("--out", out_path, "output directory")->required();
  simulate_cmd->add_option("--workers", common.workers)->check(CLI::PositiveNumber);

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "compare an effect report with ground truth");
  std::string effects_path, truth_path;
  validate_cmd->add_option("--effects", effects_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--truth", truth_path)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--out", out_path, "recovery report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest_cmd) {
      if (!in_dir.empty()) {
        auto defaults = io::ingest_paths_in(in_dir);
        for (auto [field, dflt] : {std::pair{&paths.posts, &defaults.posts},
                                   {&paths.observations, &defaults.observations},
                                   {&paths.note_events, &defaults.note_events},
                                   {&paths.labels, &defaults.labels},
                                   {&paths.reposts, &defaults.reposts},
                                   {&paths.follows, &defaults.follows}})
          if (field->empty()) *field = *dflt;
      }
      if (paths.posts.empty() || paths.observations.empty()) {
        note("ingest: --posts and --observations (or --dir) are required");
        return kUsage;
      }
      auto res = io::ingest(paths);
      io::save_archive(out_path, res.archive);
      for (const auto& r : res.report.rejections) note("rejected: " + r);
      for (const auto& w : res.report.warnings) note("warning: " + w);
      if (!report_path.empty()) io::write_text(report_path, ingest_report_json(res.report, res.archive));
      std::printf("ingested %zu treated, %zu donors\n", res.archive.cohort.treated.size(),
                  res.archive.cohort.donors.size());
    } else if (*filter_cmd) {
      auto cfg = common.config();
      auto archive = io::load_archive(archive_path);
      auto rep = pipeline::filter_stage(archive, cfg);
      io::save_archive(out_path, archive);
      for (const auto& w : rep.warnings) note("warning: " + w);
      if (!report_path.empty()) io::write_text(report_path, pipeline::filter_report_to_json(rep));
      std::printf("kept %zu/%zu treated, %zu/%zu donors\n", rep.treated_after, rep.treated_before,
                  rep.donors_after, rep.donors_before);
    } else if (*cascades_cmd) {
      auto cfg = common.config();
      auto archive = io::load_archive(archive_path);
      auto rep = pipeline::cascade_stage(archive, cfg.workers);
      io::save_archive(out_path, archive);
      std::printf("cascades for %zu posts (%zu reposts)\n", rep.posts, rep.events);
    } else if (*fit_cmd) {
      auto cfg = common.config();
      auto archive = io::load_archive(archive_path);
      if (archive.cohort.treated.empty()) throw InfeasibleError("no treated posts to fit");
      auto fits = pipeline::fit_stage(archive, cfg);
      for (const auto& f : fits.fits)
        if (f.status != FitStatus::ok) note("infeasible " + f.treated_id + ": " + f.reason);
      io::write_text(out_path, io::fits_to_json(fits, with_coefficients));
      if (fits.feasible_count() == 0) throw InfeasibleError("no feasible fits");
      std::printf("fitted %zu/%zu treated posts\n", fits.feasible_count(), fits.fits.size());
    } else if (*effects_cmd) {
      auto cfg = common.config();
      auto archive = io::load_archive(archive_path);
      auto fits = io::fits_from_json(io::read_text(fits_path));
      if (fits.feasible_count() == 0) throw InfeasibleError("no feasible fits");
      auto report = pipeline::effects_stage(archive, fits, cfg);
      io::write_text(out_path, io::effects_to_json(report));
      const fs::path dir = plot_dir.empty() ? fs::path(cfg.output_dir) : fs::path(plot_dir);
      auto files = io::write_plot_data(dir, report);
      for (const auto& w : report.warnings) note("warning: " + w);
      std::printf("effects over %zu posts; %zu plot files in %s\n", report.fits_feasible, files.size(),
                  dir.string().c_str());
    } else if (*placebo_cmd) {
      auto cfg = common.config();
      auto archive = io::load_archive(archive_path);
      if (archive.cohort.treated.empty()) throw InfeasibleError("no treated posts to backdate");
      auto rep = pipeline::placebo_stage(archive, cfg);
      io::write_text(out_path, io::placebo_to_json(rep));
      if (rep.fits_feasible == 0) throw InfeasibleError("no feasible placebo fits");
      std::printf("placebo %s\n", rep.all_pass() ? "pass" : "FAIL");
    } else if (*simulate_cmd) {
      sim::SimConfig sc;
      if (!sim_config_path.empty()) sc = io::sim_config_from_json(io::read_text(sim_config_path));
      if (seed) sc.seed = *seed;
      sc.validate();
      auto cohort = sim::simulate_cohort(sc, common.workers.value_or(default_worker_count()));
      io::write_cohort_files(out_path, cohort);
      std::printf("simulated %zu treated, %zu donors\n", cohort.cohort.treated.size(),
                  cohort.cohort.donors.size());
    } else if (*validate_cmd) {
      auto report = io::effects_from_json(io::read_text(effects_path));
      auto truth = io::truth_from_json(io::read_text(truth_path));
      write_or_print(out_path, pipeline::recovery_to_json(pipeline::validate_recovery(report, truth)));
    }
  } catch (const ConfigError& e) {
    note(std::string("config error: ") + e.what());
    return kUsage;
  } catch (const DataError& e) {
    note(std::string("error: ") + e.what());
    return kSchema;
  } catch (const InfeasibleError& e) {
    note(std::string("infeasible: ") + e.what());
    return kInfeasible;
  } catch (const std::exception& e) {
    note(std::string("error: ") + e.what());
    return kSchema;
  }
  return kOk;
}
