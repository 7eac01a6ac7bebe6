#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "sipcraft/timeseries.hpp"
#include "synthetic.hpp"

using namespace sipcraft;

TEST_CASE("parse accepts header, extra columns, BOM and CRLF") {
  const auto s = parse_series("\xEF\xBB\xBF" "Date,Close,Volume\r\n2003-01-02,1100.5,10\r\n2003-01-01,1093.25,7\r\n");
  REQUIRE(s.size() == 2);
  CHECK(s.first_date() == make_date(2003, 1, 1));
  CHECK(s.close_on(make_date(2003, 1, 2)) == 1100.5);
}

TEST_CASE("parse errors carry the offending line") {
  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_series(text);
    } catch (const SeriesParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("date,close\n2003-01-01,-5\n") == 2);
  CHECK(line_of("date,close\n2003-01-01,0\n") == 2);
  CHECK(line_of("date,close\n2003-01-01,100\n2003-02-30,101\n") == 3);
  CHECK(line_of("date,close\n2003-01-01,abc\n") == 2);
  CHECK(line_of("date,close\n2003-01-01,100\n2003-01-01,100\n") == 3);
  CHECK(line_of("2003-01-01,100\n") == 1);
  CHECK(line_of("date,close\n2003-01-01\n") == 2);
}

TEST_CASE("close_on reports the preceding trading day") {
  const auto s = parse_series("date,close\n2003-01-02,1\n2003-01-06,2\n");
  try {
    s.close_on(make_date(2003, 1, 4));
    FAIL("expected NotATradingDay");
  } catch (const NotATradingDay& e) {
    REQUIRE(e.hint());
    CHECK(*e.hint() == make_date(2003, 1, 2));
  }
  CHECK_THROWS_AS(s.close_on(make_date(2003, 1, 1)), NotATradingDay);
}

TEST_CASE("last trading day of year") {
  const auto s = parse_series("date,close\n2020-12-24,1\n2020-12-28,2\n2021-01-04,3\n");
  CHECK(last_trading_day_of_year(s, 2020) == make_date(2020, 12, 28));
  CHECK_THROWS_AS(last_trading_day_of_year(s, 2019), CoverageError);
}

TEST_CASE("property: parse . serialize . parse is identity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = testing::weekday_series(2010, 2012, seed);
    const auto text = serialize_series(s);
    const auto again = parse_series(text);
    REQUIRE(again == s);
    CHECK(serialize_series(again) == text);
  }
}

TEST_CASE("property: close_on succeeds iff the date is in the series") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    const auto full = testing::weekday_series(2015, 2015, rng(), 0.0);
    std::vector<TradingDay> kept;
    std::set<int> kept_days;
    for (const auto& d : full.days()) {
      if (rng() % 3 != 0) kept.push_back(d);
    }
    const IndexSeries s(kept);
    for (Date d = make_date(2014, 12, 25); d <= make_date(2016, 1, 5); d = add_days(d, 1)) {
      const bool in = std::any_of(kept.begin(), kept.end(), [&](const TradingDay& t) { return t.date == d; });
      if (in) {
        CHECK_NOTHROW(s.close_on(d));
      } else {
        CHECK_THROWS_AS(s.close_on(d), NotATradingDay);
      }
    }
  }
}

TEST_CASE("property: last trading day of year is in the series and in that year") {
  const auto s = testing::weekday_series(2003, 2024, 5, 0.1);
  for (int y = 2003; y <= 2024; ++y) {
    const Date d = s.last_trading_day_of_year(y);
    CHECK(s.contains(d));
    CHECK(year_of(d) == y);
    for (Date later = add_days(d, 1); year_of(later) == y; later = add_days(later, 1)) {
      CHECK_FALSE(s.contains(later));
    }
  }
}
