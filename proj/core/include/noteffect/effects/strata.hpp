#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noteffect/effects/att.hpp"

namespace noteffect {

enum class StratumRule {
  quartiles,    // numeric value, edges from the treated population
  categorical,  // label values; multi-valued labels join several strata
  bins,         // numeric value against fixed upper edges
};

struct StratumSpec {
  std::string key;
  StratumRule rule = StratumRule::categorical;
  // bins: value <= upper_edges[i] goes to bin_names[i]; larger values go to
  // the last name, so bin_names has one more entry than upper_edges.
  std::vector<double> upper_edges;
  std::vector<std::string> bin_names;
};

struct StratumAssignment {
  std::string key;
  std::vector<std::string> strata;                       // display order
  std::map<std::string, std::vector<std::string>> members;  // post -> strata
  std::vector<double> edges;                               // quartile edges, if any
};

// Quartile cut points (25th, 50th, 75th percentiles, type 7).
std::vector<double> quartile_edges(std::vector<double> values);

StratumAssignment assign_numeric_strata(const StratumSpec& spec,
                                        const std::map<std::string, double>& values);
StratumAssignment assign_label_strata(const StratumSpec& spec,
                                      const std::map<std::string, std::vector<std::string>>& labels);

struct StratumATT {
  std::string stratum;
  std::size_t members = 0;
  std::optional<ATTEntry> att;
  std::optional<double> percent_change_growth;
};

std::vector<StratumATT> stratified_att(std::span<const ITESeries> ites,
                                       const StratumAssignment& assignment,
                                       MetricKind metric, int t,
                                       const AttOptions& options = {});

// Subset of ITEs belonging to one stratum.
std::vector<ITESeries> stratum_members(std::span<const ITESeries> ites,
                                       const StratumAssignment& assignment,
                                       const std::string& stratum);

}  // namespace noteffect
