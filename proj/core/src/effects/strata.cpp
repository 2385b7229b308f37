#include "noteffect/effects/strata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "noteffect/util/error.hpp"
#include "noteffect/util/stats.hpp"

namespace noteffect {

std::vector<double> quartile_edges(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  return {stats::quantile_sorted(values, 0.25), stats::quantile_sorted(values, 0.5),
          stats::quantile_sorted(values, 0.75)};
}

namespace {

std::size_t bin_of(const std::vector<double>& upper_edges, double v) {
  std::size_t i = 0;
  while (i < upper_edges.size() && v > upper_edges[i]) ++i;
  return i;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

StratumAssignment assign_numeric_strata(const StratumSpec& spec,
                                        const std::map<std::string, double>& values) {
  StratumAssignment out;
  out.key = spec.key;
  std::vector<double> upper;
  std::vector<std::string> names;
  if (spec.rule == StratumRule::quartiles) {
    std::vector<double> finite;
    for (const auto& [id, v] : values)
      if (std::isfinite(v)) finite.push_back(v);
    out.edges = quartile_edges(finite);
    upper = out.edges;
    names = {"Q1", "Q2", "Q3", "Q4"};
  } else if (spec.rule == StratumRule::bins) {
    if (spec.bin_names.size() != spec.upper_edges.size() + 1)
      throw ConfigError("stratum key " + spec.key + ": need one more bin name than edges");
    upper = spec.upper_edges;
    names = spec.bin_names;
    out.edges = upper;
  } else {
    throw ConfigError("stratum key " + spec.key + ": categorical rule needs label values");
  }
  out.strata = names;
  for (const auto& [id, v] : values) {
    if (!std::isfinite(v)) continue;
    out.members[id] = {names[bin_of(upper, v)]};
  }
  return out;
}

StratumAssignment assign_label_strata(
    const StratumSpec& spec, const std::map<std::string, std::vector<std::string>>& labels) {
  if (spec.rule != StratumRule::categorical) {
    std::map<std::string, double> values;
    for (const auto& [id, vals] : labels)
      if (!vals.empty())
        if (auto v = parse_number(vals.front())) values[id] = *v;
    return assign_numeric_strata(spec, values);
  }
  StratumAssignment out;
  out.key = spec.key;
  std::set<std::string> seen;
  for (const auto& [id, vals] : labels) {
    std::set<std::string> unique(vals.begin(), vals.end());
    unique.erase("");
    if (unique.empty()) continue;
    out.members[id] = {unique.begin(), unique.end()};
    seen.insert(unique.begin(), unique.end());
  }
  out.strata = {seen.begin(), seen.end()};
  return out;
}

std::vector<ITESeries> stratum_members(std::span<const ITESeries> ites,
                                       const StratumAssignment& assignment,
                                       const std::string& stratum) {
  std::vector<ITESeries> out;
  for (const auto& s : ites) {
    auto it = assignment.members.find(s.treated_id);
    if (it == assignment.members.end()) continue;
    if (std::find(it->second.begin(), it->second.end(), stratum) != it->second.end())
      out.push_back(s);
  }
  return out;
}

std::vector<StratumATT> stratified_att(std::span<const ITESeries> ites,
                                       const StratumAssignment& assignment, MetricKind metric,
                                       int t, const AttOptions& options) {
  std::vector<StratumATT> out;
  for (const auto& name : assignment.strata) {
    const auto members = stratum_members(ites, assignment, name);
    StratumATT s;
    s.stratum = name;
    s.members = members.size();
    s.att = att(members, metric, t, options);
    s.percent_change_growth = percent_change_growth(members, metric, t).percent;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace noteffect
