#include <doctest.h>

#include <random>

#include "b3opt/ingest/option_line.hpp"
#include "b3opt/ingest/url.hpp"

using namespace b3opt;
using namespace b3opt::ingest;

namespace {

const Date kTradeDate = Date::parse_iso("2016-11-04");

OptionQuote random_quote(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> letter('A', 'Z');
    std::uniform_int_distribution<int> len(4, 10);
    std::uniform_int_distribution<int> digit('0', '9');
    std::uniform_real_distribution<double> price(0.01, 120.0);
    std::uniform_int_distribution<int> days(1, 400);
    std::uniform_int_distribution<int> coin(0, 1);

    OptionQuote q;
    int n = len(rng);
    for (int i = 0; i < n; ++i)
        q.ticker += static_cast<char>(i < 4 ? letter(rng) : digit(rng));
    q.option_type = coin(rng) ? OptionType::call : OptionType::put;
    q.style = coin(rng) ? ExerciseStyle::european : ExerciseStyle::american;
    q.trade_date = kTradeDate;
    q.expiration = kTradeDate.add_days(days(rng));
    q.strike = price(rng);
    q.premium = price(rng);
    q.implied_vol = price(rng);
    return q;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("download url scheme") {
    CHECK(build_download_url(Date::parse_iso("2016-11-04")) ==
          "https://www.b3.com.br/pesquisapregao/download?filelist=PE161104.ex_");
    CHECK(build_download_url(Date::parse_iso("2025-01-02"))
              .ends_with("filelist=PE250102.ex_"));
    CHECK(build_download_url(Date::parse_iso("2000-01-09"))
              .ends_with("filelist=PE000109.ex_"));
    CHECK(archive_name(Date::parse_iso("2016-11-04")) == "PE161104.ex_");
}

TEST_CASE("download url structure: fixed prefix, six digits, fixed suffix") {
    const std::string prefix = "https://www.b3.com.br/pesquisapregao/download?filelist=PE";
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> offset(0, 36500);
    Date base(2000, 1, 1);
    std::string prev;
    for (int i = 0; i < 500; ++i) {
        Date d = base.add_days(offset(rng));
        std::string url = build_download_url(d);
        REQUIRE(url.size() == prefix.size() + 6 + 4);
        CHECK(url.substr(0, prefix.size()) == prefix);
        CHECK(url.ends_with(".ex_"));
        for (size_t k = prefix.size(); k < prefix.size() + 6; ++k) CHECK(std::isdigit(url[k]));
    }
    // Injective within a century: distinct dates give distinct URLs.
    CHECK(build_download_url(Date(2016, 11, 4)) != build_download_url(Date(2016, 11, 5)));
    CHECK(build_download_url(Date(2001, 2, 3)) != build_download_url(Date(2001, 3, 2)));
}

TEST_CASE("parse sample body lines") {
    auto parsed = parse_option_line("PETRA34,C,E,20170116,19.25,0.56,51.14", kTradeDate);
    REQUIRE(parsed.quote.has_value());
    const OptionQuote& q = *parsed.quote;
    CHECK(q.ticker == "PETRA34");
    CHECK(q.option_type == OptionType::call);
    CHECK(q.style == ExerciseStyle::european);
    CHECK(q.expiration == Date::parse_iso("2017-01-16"));
    CHECK(q.strike == 19.25);
    CHECK(q.premium == 0.56);
    CHECK(q.implied_vol == 51.14);
    CHECK(q.trade_date == kTradeDate);

    auto third = parse_option_line("PETRA4,C,E,20170116,14.75,2.34,51.79", kTradeDate);
    REQUIRE(third.quote.has_value());
    CHECK(third.quote->strike == 14.75);
    CHECK(third.quote->premium == 2.34);
}

TEST_CASE("parse rejections") {
    CHECK(!parse_option_line("X,Q,E,20170116,1.0,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(parse_option_line("X,Q,E,20170116,1.0,1.0,1.0", kTradeDate).error.find("Q") !=
          std::string::npos);
    CHECK(!parse_option_line("X,C,Z,20170116,1.0,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(!parse_option_line("X,C,E,20170116,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(!parse_option_line("X,C,E,2017-01-16,1.0,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(!parse_option_line("X,C,E,20170116,abc,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(!parse_option_line("X,C,E,20170116,-2,1.0,1.0", kTradeDate).quote.has_value());
    CHECK(!parse_option_line("", kTradeDate).quote.has_value());
}

TEST_CASE("extra trailing fields tolerated and flagged") {
    auto parsed = parse_option_line("PETRA34,C,E,20170116,19.25,0.56,51.14,junk", kTradeDate);
    REQUIRE(parsed.quote.has_value());
    CHECK(parsed.extra_fields);
    CHECK(parsed.quote->implied_vol == 51.14);
}

TEST_CASE("file parse skips header, collects errors, tolerates crlf") {
    std::string text =
        "20161104\r\n"
        "PETRA34,C,E,20170116,19.25,0.56,51.14\r\n"
        "\r\n"
        "BAD LINE\r\n"
        "PETRA70,C,E,20170116,10.75,5.60,60.85,extra\r\n";
    auto [quotes, report] = parse_option_file(text, kTradeDate);
    CHECK(quotes.size() == 2);
    CHECK(report.body_lines == 3);
    CHECK(report.parsed == 2);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].line_no == 4);
    REQUIRE(report.extra_field_lines.size() == 1);
    CHECK(report.extra_field_lines[0] == 5);
}

TEST_CASE("render/parse round-trip for 1000 randomized quotes") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        OptionQuote q = random_quote(rng);
        auto parsed = parse_option_line(render_option_line(q), q.trade_date);
        REQUIRE(parsed.quote.has_value());
        CHECK(*parsed.quote == q);
    }
}

TEST_CASE("filter keeps only PETR european calls expiring in (0, 92]") {
    auto mk = [](const char* ticker, OptionType t, ExerciseStyle s, int days) {
        OptionQuote q;
        q.ticker = ticker;
        q.option_type = t;
        q.style = s;
        q.trade_date = kTradeDate;
        q.expiration = kTradeDate.add_days(days);
        q.strike = 10;
        return q;
    };
    std::vector<OptionQuote> quotes{
        mk("PETRA34", OptionType::call, ExerciseStyle::european, 60),   // kept
        mk("VALEA11", OptionType::call, ExerciseStyle::european, 60),   // ticker prefix
        mk("PETRA34", OptionType::put, ExerciseStyle::european, 60),    // put
        mk("PETRA34", OptionType::call, ExerciseStyle::american, 60),   // style
        mk("PETRA34", OptionType::call, ExerciseStyle::european, 0),    // expired
        mk("PETRA34", OptionType::call, ExerciseStyle::european, 92),   // boundary kept
        mk("PETRA34", OptionType::call, ExerciseStyle::european, 93),   // too far
    };
    auto kept = filter_records(quotes);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].expiration - kept[0].trade_date == 60);
    CHECK(kept[1].expiration - kept[1].trade_date == 92);

    // Idempotent and output subset of input.
    auto twice = filter_records(kept);
    CHECK(twice == kept);
}

}  // TEST_SUITE
