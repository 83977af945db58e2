#include "gridnet/evolution.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gridnet;

TEST(Pearson, PerfectCorrelations)
{
  const std::vector<double> a{1, 2, 3}, b{2, 4, 6}, c{-1, -2, -3};
  EXPECT_DOUBLE_EQ(pearson(a, b), 1.0);
  EXPECT_DOUBLE_EQ(pearson(a, a), 1.0);
  EXPECT_DOUBLE_EQ(pearson(a, c), -1.0);
}

TEST(Pearson, Errors)
{
  const std::vector<double> a{1, 2, 3}, b{1, 2}, flat{4, 4, 4}, one{1};
  EXPECT_THROW(pearson(a, b), DomainError);
  EXPECT_THROW(pearson(one, one), DomainError);
  EXPECT_THROW(pearson(a, flat), DomainError);
}

TEST(Pearson, SymmetricAndAffineInvariant)
{
  std::mt19937 gen(5);
  std::normal_distribution<double> noise;
  std::uniform_real_distribution<double> scale(0.1, 10.0), shift(-50, 50);
  for (int trial = 0; trial < 100; ++trial)
  {
    std::vector<double> a(3 + trial % 40), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
      a[i] = noise(gen);
      b[i] = 0.5 * a[i] + noise(gen);
    }
    const double r = pearson(a, b);
    EXPECT_EQ(r, pearson(b, a));
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    const double s = scale(gen), t = shift(gen);
    std::vector<double> a2 = a;
    for (auto& v : a2)
      v = s * v + t;
    EXPECT_NEAR(pearson(a2, b), r, 1e-12);
    if (*std::max_element(a2.begin(), a2.end()) > 0)
    {
      EXPECT_NEAR(pearson(normalize_to_max(a2), b), r, 1e-12);
    }
  }
}

TEST(NormalizeToMax, DividesByMaximum)
{
  EXPECT_EQ(normalize_to_max(std::vector<double>{5, 10}), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(normalize_to_max(std::vector<double>{3, 3, 3}), (std::vector<double>{1, 1, 1}));
  EXPECT_THROW(normalize_to_max(std::vector<double>{0, 0}), DomainError);
  EXPECT_THROW(normalize_to_max(std::vector<double>{}), DomainError);
}

TEST(NormalizeToMax, Idempotent)
{
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(0.01, 100);
  for (int trial = 0; trial < 50; ++trial)
  {
    std::vector<double> s(1 + trial % 20);
    for (auto& v : s)
      v = u(gen);
    const auto once = normalize_to_max(s);
    EXPECT_EQ(normalize_to_max(once), once);
  }
}

TEST(SmallWorldTransition, FirstCrossing)
{
  const std::vector<Year> years{1949, 1950, 1951, 1952};
  const std::vector<std::optional<double>> sigma{0.5, 0.9, 1.2, 1.1};
  const auto t = small_world_transition(years, sigma);
  EXPECT_EQ(t.first_year, 1951);
  ASSERT_EQ(t.crossings.size(), 1u);
  EXPECT_TRUE(t.crossings[0].upward);
}

TEST(SmallWorldTransition, NeverAndUndefined)
{
  const std::vector<Year> years{1, 2, 3};
  const std::vector<std::optional<double>> low{0.5, std::nullopt, 1.0};
  EXPECT_FALSE(small_world_transition(years, low).first_year);
  const std::vector<std::optional<double>> gaps{std::nullopt, 1.5, 0.7};
  const auto t = small_world_transition(years, gaps);
  EXPECT_EQ(t.first_year, 2);
  ASSERT_EQ(t.crossings.size(), 2u);
  EXPECT_FALSE(t.crossings[1].upward);
  EXPECT_EQ(t.crossings[1].year, 3);
}

TEST(SmallWorldTransition, FixtureCrossesWhenMeshingLinesArrive)
{
  // 1966 brings the 220 kV lines N01-N03 and N07-N09, closing the first triangles.
  const auto ts = compute_timeseries(testing_support::fixture_log(), 1950, 1980);
  EXPECT_EQ(small_world_transition(ts).first_year, 1966);
  EXPECT_EQ(*ts.records[1965 - 1950].clustering, 0.0);
  EXPECT_DOUBLE_EQ(*ts.records[1966 - 1950].clustering, 19.0 / 66.0);
}

TEST(Timeseries, AlignedRecords)
{
  const auto log = testing_support::fixture_log();
  const auto ts = compute_timeseries(log, 1945, 1985);
  ASSERT_EQ(ts.years.size(), 41u);
  ASSERT_EQ(ts.records.size(), 41u);
  for (std::size_t i = 0; i < ts.years.size(); ++i)
  {
    EXPECT_EQ(ts.years[i], 1945 + static_cast<Year>(i));
    EXPECT_EQ(ts.records[i].year, ts.years[i]);
  }
  EXPECT_EQ(ts.records.front().nodes, 0u);
  EXPECT_EQ(compute_timeseries(log, 1950, 1954).records.size(), 5u);
  EXPECT_THROW(compute_timeseries(log, 1980, 1979), DomainError);
}

TEST(Timeseries, EachRecordEqualsSingleYearAnalysis)
{
  const auto log = testing_support::fixture_log();
  const auto ts = compute_timeseries(log, 1950, 1980, 7);
  for (std::size_t i = 0; i < ts.years.size(); ++i)
    EXPECT_EQ(to_csv_row(ts.records[i]), to_csv_row(analyze_year(log, ts.years[i], 7)));
}

TEST(Timeseries, NodeCountMonotoneWithoutDecommissions)
{
  const auto log = testing_support::log_from_text(
    "id,name,kind,commissioned,decommissioned,domestic\n"
    "a,,substation,1950,,true\nb,,substation,1952,,true\nc,,substation,1955,,true\n",
    "id,node_a,node_b,voltage_kv,commissioned,decommissioned,domestic\n"
    "x,a,b,120,1953,,true\ny,b,c,220,1956,,true\n");
  const auto ts = compute_timeseries(log, 1948, 1960);
  for (std::size_t i = 1; i < ts.records.size(); ++i)
  {
    EXPECT_GE(ts.records[i].nodes, ts.records[i - 1].nodes);
    EXPECT_GE(ts.records[i].edges, ts.records[i - 1].edges);
  }
}

TEST(Timeseries, SubRangeEqualsSlice)
{
  const auto log = testing_support::fixture_log();
  const auto full = compute_timeseries(log, 1950, 1980);
  const auto part = compute_timeseries(log, 1960, 1970);
  for (std::size_t i = 0; i < part.years.size(); ++i)
    EXPECT_EQ(to_csv_row(part.records[i]), to_csv_row(full.records[i + 10]));
}

TEST(Timeseries, WorkerCountDoesNotChangeOutput)
{
  const auto log = testing_support::fixture_log();
  const auto seq = compute_timeseries(log, 1950, 1980, 42, 1);
  for (std::size_t workers : {2u, 4u, 64u})
  {
    const auto par = compute_timeseries(log, 1950, 1980, 42, workers);
    ASSERT_EQ(par.years, seq.years);
    for (std::size_t i = 0; i < seq.records.size(); ++i)
      EXPECT_EQ(to_csv_row(par.records[i]), to_csv_row(seq.records[i]));
  }
}

TEST(Correlate, DropsUndefinedYears)
{
  const auto log = testing_support::fixture_log();
  const auto ts = compute_timeseries(log, 1950, 1980);
  const auto lines = line_count_series(log, {220, 400}, true, 1950, 1980);
  const auto rep = correlate(ts, Metric::sigma, lines);
  const auto sigma = ts.values(Metric::sigma);
  std::size_t undefined = 0;
  std::vector<double> a, b;
  for (std::size_t i = 0; i < sigma.size(); ++i)
  {
    if (!sigma[i])
    {
      ++undefined;
      continue;
    }
    a.push_back(*sigma[i]);
    b.push_back(lines.values[i]);
  }
  EXPECT_EQ(rep.dropped_years.size(), undefined);
  EXPECT_EQ(rep.used_years.size() + rep.dropped_years.size(), 31u);
  EXPECT_EQ(rep.r, pearson(a, b));
  EXPECT_NEAR(rep.r, correlate(ts, Metric::sigma, YearSeries{lines.years, normalize_to_max(lines.values)}).r, 1e-12);
}

TEST(Correlate, MisalignedYearsRejected)
{
  const auto log = testing_support::fixture_log();
  const auto ts = compute_timeseries(log, 1950, 1980);
  EXPECT_THROW(correlate(ts, Metric::sigma, line_count_series(log, {400}, false, 1951, 1980)), DomainError);
}

TEST(Metric, NamesMatchCsvColumns)
{
  EXPECT_EQ(parse_metric("sigma"), Metric::sigma);
  EXPECT_EQ(parse_metric("L"), Metric::path_length);
  EXPECT_FALSE(parse_metric("bogus"));
}
