#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "noteffect/core_model/align.hpp"
#include "noteffect/core_model/anomaly.hpp"
#include "noteffect/core_model/eligibility.hpp"
#include "noteffect/core_model/treatment.hpp"
#include "noteffect/effects/readability.hpp"
#include "noteffect/util/error.hpp"

using namespace noteffect;

namespace {

std::vector<RawObservation> obs(std::vector<std::pair<double, double>> minutes_values) {
  std::vector<RawObservation> out;
  for (auto [m, v] : minutes_values)
    out.push_back({"p", MetricKind::views, static_cast<Millis>(m * kMinute), v});
  return out;
}

// Independent piecewise-linear evaluation.
double interp_oracle(const std::vector<std::pair<double, double>>& pts, double x) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto [x0, y0] = pts[i];
    auto [x1, y1] = pts[i + 1];
    if (x >= x0 && x <= x1) return x1 == x0 ? y1 : y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  }
  return NAN;
}

}  // namespace

TEST_CASE("align_series interpolates onto the grid") {
  auto r = align_series(obs({{0, 0}, {30, 10}}), 0);
  CHECK(r.series.first_step == 0);
  REQUIRE(r.series.values.size() == 3);
  CHECK(r.series.values[1] == doctest::Approx(5.0));
  CHECK(r.series.values[2] == 10.0);

  auto id = align_series(obs({{0, 1}, {15, 4}, {30, 9}, {45, 9}}), 0);
  CHECK(id.series.values == std::vector<double>{1, 4, 9, 9});

  auto r3 = align_series(obs({{0, 0}, {5, 2}, {20, 8}, {35, 8}}), 0);
  REQUIRE(r3.series.values.size() == 3);
  CHECK(r3.series.values[0] == 0.0);
  CHECK(r3.series.values[1] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r3.series.values[2] == doctest::Approx(8.0));

  CHECK_THROWS_WITH_AS(align_series(std::vector<RawObservation>{}, 0), "no data", DataError);
}

TEST_CASE("align_series matches a scalar interpolation oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts;
    double t = std::uniform_real_distribution<>(0, 40)(rng), v = 0;
    int n = 2 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      pts.push_back({std::round(t), v});
      t += 1 + std::uniform_real_distribution<>(0, 50)(rng);
      v += std::uniform_real_distribution<>(0, 100)(rng);
    }
    auto r = align_series(obs(pts), 0);
    for (std::size_t k = 0; k < r.series.values.size(); ++k) {
      double age = static_cast<double>(r.series.age_of(k)) / kMinute;
      CHECK(age >= pts.front().first);
      CHECK(age <= pts.back().first);
      CHECK(r.series.values[k] == doctest::Approx(interp_oracle(pts, age)).epsilon(1e-12));
    }
    // Grid points just outside the observed span are not produced.
    CHECK(r.series.first_step * 15.0 - 15.0 < pts.front().first);
    CHECK(r.series.last_step() * 15.0 + 15.0 > pts.back().first);
  }
}

TEST_CASE("assign_treatment uses the earliest helpful rating") {
  CHECK_FALSE(assign_treatment(std::vector<NoteStatusEvent>{}).treated);
  std::vector<NoteStatusEvent> one{{"p", "n1", NoteStatus::helpful, 10 * kHour, ""}};
  auto a = assign_treatment(one);
  CHECK(a.treated);
  CHECK(*a.treatment_time == 10 * kHour);

  std::vector<NoteStatusEvent> flips{{"p", "n1", NoteStatus::helpful, 10 * kHour, ""},
                                     {"p", "n1", NoteStatus::not_helpful, 25 * kHour + 30 * kMinute, ""},
                                     {"p", "n2", NoteStatus::helpful, 30 * kHour, ""}};
  auto b = assign_treatment(flips);
  CHECK(b.treated);
  CHECK(*b.treatment_time == 10 * kHour);
}

TEST_CASE("effective_note_attributes weights notes by helpful time") {
  const std::string simple = "The cat sat.";
  const std::string dense =
      "Comprehensive epidemiological investigations demonstrated considerable methodological "
      "inconsistencies throughout the publication.";
  const double g_simple = *flesch_kincaid(simple), g_dense = *flesch_kincaid(dense);

  auto p = test::post("p", 0);
  p.notes.push_back({"a", simple, {{0, 48 * kHour}}});
  auto one = effective_note_attributes(p);
  CHECK(one.at(label_keys::kNoteGradeLevel) == doctest::Approx(g_simple));

  p.notes = {{"a", simple, {{0, 36 * kHour}}}, {"b", dense, {{36 * kHour, 48 * kHour}}}};
  auto mix = effective_note_attributes(p);
  CHECK(mix.at(label_keys::kNoteGradeLevel) == doctest::Approx(0.75 * g_simple + 0.25 * g_dense));

  p.notes = {{"a", simple, {}}, {"b", dense, {{0, 10 * kHour}}}};
  auto only_b = effective_note_attributes(p);
  CHECK(only_b.at(label_keys::kNoteGradeLevel) == doctest::Approx(g_dense));
  CHECK(only_b.at(label_keys::kNoteSentenceCount) == 1.0);

  p.notes = {{"a", simple, {}}};
  CHECK(effective_note_attributes(p).empty());
}

TEST_CASE("helpful_intervals closes on status changes and clips to the window") {
  std::vector<NoteStatusEvent> ev{{"p", "n1", NoteStatus::helpful, 10, "x"},
                                  {"p", "n1", NoteStatus::not_helpful, 20, ""},
                                  {"p", "n1", NoteStatus::helpful, 30, ""},
                                  {"p", "n2", NoteStatus::not_helpful, 5, "y"}};
  auto notes = helpful_intervals(ev, 0, 100);
  REQUIRE(notes.size() == 2);
  CHECK(notes[0].text == "x");
  CHECK(notes[0].helpful == std::vector<HelpfulInterval>{{10, 20}, {30, 100}});
  CHECK(notes[1].helpful.empty());
}

TEST_CASE("eligibility_filter") {
  const Millis T = 10 * kHour;
  const int a = static_cast<int>(T / kGridStep);
  auto covering = [&](Millis pre, Millis post_) {
    auto p = test::post("p", T);
    int b = a - static_cast<int>(pre / kGridStep), e = a + static_cast<int>(post_ / kGridStep);
    p.series[MetricKind::views] = test::series(MetricKind::views, b, std::vector<double>(e - b + 1, 1.0));
    return p;
  };
  Cohort c;
  c.treated.push_back(covering(30 * kMinute, 50 * kHour));
  auto r = eligibility_filter(c);
  CHECK(r.cohort.treated.empty());
  REQUIRE(r.exclusions.size() == 1);
  CHECK(r.exclusions[0].reason == kInsufficientPre);

  auto reposts_only = test::post("q", T);
  reposts_only.series[MetricKind::reposts] =
      test::series(MetricKind::reposts, a - 8, std::vector<double>(8 + 192 + 1, 2.0));
  reposts_only.series[MetricKind::views] = test::series(MetricKind::views, a - 8, std::vector<double>(9, 2.0));
  c.treated = {reposts_only};
  CHECK(eligibility_filter(c).cohort.treated.size() == 1);

  c.treated = {covering(5 * kHour, 47 * kHour)};
  r = eligibility_filter(c);
  REQUIRE(r.exclusions.size() == 1);
  CHECK(r.exclusions[0].reason == kInsufficientPost);
}

TEST_CASE("classify_availability") {
  const int a = 40;
  auto cov = [&](int from_h, int to_h) {
    return test::series(MetricKind::views, a + from_h * 4, std::vector<double>((to_h - from_h) * 4 + 1, 0.0));
  };
  CHECK(classify_availability(cov(-3, 50), a) == AvailabilityClass::fully_available);
  CHECK(classify_availability(cov(-3, -1), a) == AvailabilityClass::dropped_pre_treatment);
  CHECK(classify_availability(cov(1, 50), a) == AvailabilityClass::only_post_treatment);
  CHECK(classify_availability(cov(-3, 20), a) == AvailabilityClass::dropped_post_treatment);
  CHECK(classify_availability(EngagementSeries{}, a) == AvailabilityClass::unavailable);
}

TEST_CASE("detect_anomalies") {
  auto s = test::series(MetricKind::views, 0, {590, 600, 630, 630, 600, 610});
  auto r = detect_anomalies(s);
  CHECK(r.flagged);
  REQUIRE(r.evidence.size() == 2);
  CHECK(r.evidence[0].delta == 30.0);
  CHECK(r.evidence[0].percent == doctest::Approx(5.0));
  CHECK(r.evidence[1].delta == -30.0);
  CHECK(r.evidence[1].age == 4 * kGridStep);

  auto big = test::series(MetricKind::views, 0, {2000, 2025, 2025, 2000});
  CHECK_FALSE(detect_anomalies(big).flagged);

  auto mono = test::series(MetricKind::views, 0, {0, 100, 200, 200, 5000});
  CHECK_FALSE(detect_anomalies(mono).flagged);

  // A dip before the spike is just as much an artifact.
  auto dip_first = test::series(MetricKind::likes, 0, {1000, 950, 1000});
  CHECK(detect_anomalies(dip_first).flagged);
}
