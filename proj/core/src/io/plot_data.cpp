#include "noteffect/io/plot_data.hpp"

#include <fstream>

#include "noteffect/io/csv.hpp"
#include "noteffect/util/error.hpp"

namespace noteffect::io {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

class TsvFile {
 public:
  TsvFile(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot write " + path.string());
  }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) out_ << '\t';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string n(std::size_t v) { return std::to_string(v); }

}  // namespace

std::vector<std::string> write_plot_data(const std::filesystem::path& dir, const EffectReport& report) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    written.push_back(name);
    return TsvFile(dir / name);
  };

  for (const auto& e : report.metrics) {
    const std::string m(to_string(e.metric));
    {
      auto f = open("att_" + m + ".tsv");
      f.row({"t", "hours", "n", "att", "se", "ci_low", "ci_high", "mean_y1", "mean_y0hat"});
      for (const auto& a : e.att.entries)
        f.row({std::to_string(a.t), format_double(a.t * 0.25), n(a.n), format_double(a.att),
               format_double(a.se), format_double(a.ci_low), format_double(a.ci_high),
               format_double(a.mean_y1), format_double(a.mean_y0hat)});
    }
    {
      auto f = open("hist_" + m + ".tsv");
      f.row({"low", "high", "positive", "negative"});
      for (std::size_t k = 0; k + 1 < e.histogram.edges.size(); ++k)
        f.row({format_double(e.histogram.edges[k]), format_double(e.histogram.edges[k + 1]),
               n(e.histogram.positive[k]), n(e.histogram.negative[k])});
    }
  }

  for (const auto& s : report.strata) {
    auto bars = open("strata_" + s.key + ".tsv");
    bars.row({"metric", "stratum", "members", "n", "att", "ci_low", "ci_high", "percent_change_growth"});
    auto share = open("positive_share_" + s.key + ".tsv");
    share.row({"metric", "stratum", "k", "n", "share", "ci_low", "ci_high", "coefficient_of_variation"});
    for (const auto& [metric, list] : s.att) {
      const std::string m(to_string(metric));
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto& a = list[i];
        bars.row({m, a.stratum, n(a.members), a.att ? n(a.att->n) : "0",
                  a.att ? format_double(a.att->att) : "NA", a.att ? format_double(a.att->ci_low) : "NA",
                  a.att ? format_double(a.att->ci_high) : "NA", cell(a.percent_change_growth)});
        const auto& p = s.positive_share.at(metric)[i];
        share.row({m, a.stratum, n(p.k), n(p.n), format_double(p.share), format_double(p.ci_low),
                   format_double(p.ci_high), cell(s.coefficient_of_variation.at(metric)[i])});
      }
    }
  }

  for (const auto& g : report.growth_matched) {
    auto f = open("growth_match_" + std::string(to_string(g.metric)) + ".tsv");
    f.row({"low", "high", "treated_n", "treated_mean", "control_n", "control_mean"});
    for (const auto& b : g.bins.bins)
      f.row({format_double(b.low), format_double(b.high), n(b.treated_n), cell(b.treated_mean),
             n(b.control_n), cell(b.control_mean)});
  }
  return written;
}

}  // namespace noteffect::io
