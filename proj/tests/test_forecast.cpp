#include <array>
#include <random>

#include "doctest.h"
#include "pulse/forecast.hpp"
#include "support/oracles.hpp"

using namespace pulse;

namespace {

constexpr Timestamp kMonday = 1554076800;  // 2019-04-01T00:00:00Z
constexpr std::int64_t kDayBins = 288;
constexpr std::int64_t kWeekBins = 7 * kDayBins;

}  // namespace

TEST_CASE("constant history forecasts the constant") {
  OccupancySeries history{"", kMonday, 300, std::vector<std::int64_t>(3 * kDayBins, 42)};
  auto predicted = forecast(history, 288);
  CHECK(predicted == std::vector<std::int64_t>(288, 42));
}

TEST_CASE("same weekday slot is averaged across weeks") {
  // Two weeks, Monday 12:00 bins hold 100 then 200; forecast the third Monday.
  OccupancySeries history{"", kMonday, 300, std::vector<std::int64_t>(2 * kWeekBins, 7)};
  const std::int64_t noon = 12 * 12;
  history.counts[noon] = 100;
  history.counts[kWeekBins + noon] = 200;
  auto predicted = forecast(history, kDayBins);
  CHECK(predicted[noon] == 150);
  CHECK(predicted[noon + 1] == 7);
}

TEST_CASE("only the latest weeks are used") {
  OccupancySeries history{"", kMonday, 300, {}};
  for (int week = 0; week < 6; ++week) {
    for (std::int64_t i = 0; i < kWeekBins; ++i) history.counts.push_back(week < 2 ? 1000 : 10 * week);
  }
  // Weeks 2..5 hold 20, 30, 40, 50.
  CHECK(forecast(history, 1)[0] == 35);
  CHECK(forecast(history, 1, 2)[0] == 45);
}

TEST_CASE("missing weekday falls back to the time-of-day mean") {
  // One Monday of history, forecasting into Tuesday.
  OccupancySeries history{"", kMonday, 300, std::vector<std::int64_t>(kDayBins, 0)};
  for (std::int64_t i = 0; i < kDayBins; ++i) history.counts[i] = i % 10;
  auto predicted = forecast(history, kDayBins);
  for (std::int64_t i = 0; i < kDayBins; ++i) CHECK(predicted[i] == i % 10);
}

TEST_CASE("short history falls back to the overall mean") {
  OccupancySeries history{"", kMonday, 300, {1, 2}};  // mean 1.5 rounds up
  auto predicted = forecast(history, 5);
  CHECK(predicted[0] == 2);
  CHECK(predicted[4] == 2);
}

TEST_CASE("empty history forecasts zeros and bad widths are rejected") {
  CHECK(forecast(OccupancySeries{"", kMonday, 300, {}}, 4) == std::vector<std::int64_t>(4, 0));
  CHECK_THROWS_AS(forecast(OccupancySeries{"", kMonday, 7, {1}}, 4), Error);
}

TEST_CASE("rounding is half up") {
  // Weekly slot means of 2.5 and 3.5 round to 3 and 4.
  OccupancySeries history{"", kMonday, 300, std::vector<std::int64_t>(2 * kWeekBins, 0)};
  history.counts[0] = 2;
  history.counts[kWeekBins] = 3;
  history.counts[1] = 3;
  history.counts[kWeekBins + 1] = 4;
  auto predicted = forecast(history, 2);
  CHECK(predicted == std::vector<std::int64_t>{3, 4});
}

TEST_CASE("property: forecast equals calendar recomputation on random histories") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 60; ++round) {
    const Seconds width = std::array<Seconds, 3>{300, 900, 3600}[rng() % 3];
    const std::int64_t day_bins = 86400 / width;
    // Start anywhere on the bin grid of some week; length from a few bins to five weeks.
    const Timestamp start = kMonday + static_cast<Timestamp>(rng() % (7 * day_bins)) * width + (rng() % 2) * 60;
    const auto length = static_cast<std::size_t>(rng() % (35 * day_bins));
    OccupancySeries history{"", start, width, {}};
    for (std::size_t i = 0; i < length; ++i) history.counts.push_back(static_cast<std::int64_t>(rng() % 500));
    const auto horizon = static_cast<std::size_t>(1 + rng() % (2 * day_bins));
    const std::size_t weeks = 1 + rng() % 4;
    CAPTURE(round);
    CHECK(forecast(history, horizon, weeks) ==
          testing::forecast_by_calendar(start, width, history.counts, horizon, weeks));
  }
}

TEST_CASE("property: a weekly periodic history is reproduced exactly") {
  std::mt19937_64 rng(7);
  std::vector<std::int64_t> week(kWeekBins);
  for (auto& v : week) v = static_cast<std::int64_t>(rng() % 900);
  for (int weeks_of_history : {1, 2, 3, 5}) {
    OccupancySeries history{"", kMonday + 3600, 300, {}};
    for (int w = 0; w < weeks_of_history; ++w) history.counts.insert(history.counts.end(), week.begin(), week.end());
    auto predicted = forecast(history, 2 * kWeekBins);
    for (std::int64_t i = 0; i < 2 * kWeekBins; ++i) CHECK(predicted[i] == week[i % kWeekBins]);
  }
}
