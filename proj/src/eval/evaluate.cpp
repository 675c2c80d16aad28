#include "b3opt/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "b3opt/core/errors.hpp"
#include "b3opt/core/num_format.hpp"

namespace b3opt::eval {

double mae(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty()) throw InputError("MAE of empty series");
    if (actual.size() != predicted.size()) throw InputError("MAE series length mismatch");
    double sum = 0;
    for (size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

const char* to_string(ExpirationCategory c) {
    switch (c) {
        case ExpirationCategory::one_month: return "1M";
        case ExpirationCategory::two_months: return "2M";
        case ExpirationCategory::three_months: return "3M";
    }
    return "?";
}

ExpirationCategory expiration_category(const data::DatasetRow& row) {
    int d = row.expiration - row.trade_date;
    if (d <= 0 || d > 92)
        throw InputError("days to expiry " + std::to_string(d) + " outside (0, 92]");
    if (d <= 31) return ExpirationCategory::one_month;
    if (d <= 62) return ExpirationCategory::two_months;
    return ExpirationCategory::three_months;
}

namespace {

void check_alignment(std::span<const data::DatasetRow> rows, std::span<const double> predictions) {
    if (rows.size() != predictions.size())
        throw InputError("predictions not aligned with rows (" + std::to_string(predictions.size()) +
                         " vs " + std::to_string(rows.size()) + ")");
}

struct MaeAccum {
    double model_abs = 0;
    double bs_abs = 0;
    size_t count = 0;

    void add(const data::DatasetRow& row, double prediction) {
        model_abs += std::abs(row.premium - prediction);
        bs_abs += std::abs(row.premium - row.bs_price);
        ++count;
    }
    MaePair finish() const {
        return {model_abs / static_cast<double>(count), bs_abs / static_cast<double>(count), count};
    }
};

}  // namespace

std::map<int, MaePair> bracket_mae(std::span<const data::DatasetRow> rows,
                                   std::span<const double> predictions, double width) {
    check_alignment(rows, predictions);
    if (!(width > 0)) throw InputError("bracket width must be positive");
    std::map<int, MaeAccum> accum;
    for (size_t i = 0; i < rows.size(); ++i) {
        int key = static_cast<int>(std::floor(rows[i].premium / width));
        accum[key].add(rows[i], predictions[i]);
    }
    std::map<int, MaePair> out;
    for (auto& [key, acc] : accum) out[key] = acc.finish();
    return out;
}

RangeReport range_report(std::span<const data::DatasetRow> rows,
                         std::span<const double> predictions, double lo, double hi) {
    check_alignment(rows, predictions);
    RangeReport report;
    report.lo = lo;
    report.hi = hi;
    MaeAccum acc;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].premium >= lo && rows[i].premium <= hi) acc.add(rows[i], predictions[i]);
    }
    if (acc.count == 0) {
        report.empty = true;
        return report;
    }
    report.in_range = acc.finish();
    report.share = rows.empty() ? 0.0
                                : static_cast<double>(acc.count) / static_cast<double>(rows.size());
    return report;
}

std::vector<DailyAverage> daily_average_report(std::span<const data::DatasetRow> rows,
                                               std::span<const double> predictions) {
    check_alignment(rows, predictions);
    struct Sums {
        double actual = 0, model = 0, bs = 0;
        size_t count = 0;
    };
    std::map<Date, Sums> by_date;
    for (size_t i = 0; i < rows.size(); ++i) {
        Sums& s = by_date[rows[i].trade_date];
        s.actual += rows[i].premium;
        s.model += predictions[i];
        s.bs += rows[i].bs_price;
        ++s.count;
    }
    std::vector<DailyAverage> out;
    out.reserve(by_date.size());
    for (auto& [date, s] : by_date) {
        double n = static_cast<double>(s.count);
        out.push_back({date, s.actual / n, s.model / n, s.bs / n, s.count});
    }
    return out;  // std::map keeps dates ascending
}

std::map<ExpirationCategory, TickerRanking> ticker_rankings(
    std::span<const data::DatasetRow> rows, std::span<const double> predictions, size_t k) {
    check_alignment(rows, predictions);
    struct Accum {
        double abs = 0;
        size_t count = 0;
    };
    std::map<ExpirationCategory, std::map<std::string, Accum>> per_category;
    for (size_t i = 0; i < rows.size(); ++i) {
        Accum& a = per_category[expiration_category(rows[i])][rows[i].ticker];
        a.abs += std::abs(rows[i].premium - predictions[i]);
        ++a.count;
    }

    std::map<ExpirationCategory, TickerRanking> out;
    for (auto& [cat, tickers] : per_category) {
        std::vector<TickerMae> maes;
        maes.reserve(tickers.size());
        for (auto& [ticker, a] : tickers)
            maes.push_back({ticker, a.abs / static_cast<double>(a.count), a.count});

        std::sort(maes.begin(), maes.end(), [](const TickerMae& a, const TickerMae& b) {
            if (a.model_mae != b.model_mae) return a.model_mae < b.model_mae;
            return a.ticker < b.ticker;
        });
        TickerRanking ranking;
        size_t n_best = std::min(k, maes.size());
        ranking.best.assign(maes.begin(), maes.begin() + n_best);

        std::sort(maes.begin(), maes.end(), [](const TickerMae& a, const TickerMae& b) {
            if (a.model_mae != b.model_mae) return a.model_mae > b.model_mae;
            return a.ticker < b.ticker;
        });
        size_t n_worst = std::min(k, maes.size());
        ranking.worst.assign(maes.begin(), maes.begin() + n_worst);
        out[cat] = std::move(ranking);
    }
    return out;
}

EvalReport evaluate(std::span<const data::DatasetRow> rows, std::span<const double> predictions,
                    size_t ranking_k) {
    check_alignment(rows, predictions);
    if (rows.empty()) throw InputError("nothing to evaluate");

    // Economic floor: the network head is unconstrained, reports are not.
    std::vector<double> clamped(predictions.begin(), predictions.end());
    for (double& p : clamped) p = std::max(p, 0.0);

    EvalReport report;
    report.ranking_k = ranking_k;

    MaeAccum overall;
    std::map<std::string, MaeAccum> trade_month, exp_month;
    std::map<ExpirationCategory, MaeAccum> category;
    for (size_t i = 0; i < rows.size(); ++i) {
        overall.add(rows[i], clamped[i]);
        trade_month[rows[i].trade_date.year_month()].add(rows[i], clamped[i]);
        exp_month[rows[i].expiration.year_month()].add(rows[i], clamped[i]);
        category[expiration_category(rows[i])].add(rows[i], clamped[i]);
    }
    report.overall = overall.finish();
    for (auto& [key, acc] : trade_month) report.by_trade_month[key] = acc.finish();
    for (auto& [key, acc] : exp_month) report.by_expiration_month[key] = acc.finish();
    for (auto& [key, acc] : category) report.by_category[key] = acc.finish();

    report.by_bracket = bracket_mae(rows, clamped, report.bracket_width);
    report.range = range_report(rows, clamped);
    report.daily = daily_average_report(rows, clamped);
    report.rankings = ticker_rankings(rows, clamped, ranking_k);
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string report_text(const EvalReport& r) {
    std::string out;
    out += "== overall ==\n";
    out += "rows: " + std::to_string(r.overall.count) + "\n";
    out += "model MAE: " + fmt(r.overall.model) + "\n";
    out += "bs MAE:    " + fmt(r.overall.bs) + "\n";

    out += "\n== premium range [" + fmt(r.range.lo) + ", " + fmt(r.range.hi) + "] ==\n";
    if (r.range.empty) {
        out += "no transactions in range\n";
    } else {
        out += "in-range share: " + fmt(r.range.share) + "\n";
        out += "model MAE: " + fmt(r.range.in_range.model) + "\n";
        out += "bs MAE:    " + fmt(r.range.in_range.bs) + "\n";
        if (r.range.in_range.bs > 0) {
            double ratio = r.range.in_range.model / r.range.in_range.bs;
            out += "model/bs ratio: " + fmt(ratio) + "\n";
            out += "reduction vs bs: " + fmt((1.0 - ratio) * 100.0) + "%\n";
        }
    }

    out += "\n== expiration categories ==\n";
    for (auto& [cat, pair] : r.by_category) {
        out += std::string(to_string(cat)) + ": model " + fmt(pair.model) + ", bs " +
               fmt(pair.bs) + ", n=" + std::to_string(pair.count) + "\n";
    }

    out += "\n== by trade month ==\n";
    for (auto& [month, pair] : r.by_trade_month)
        out += month + ": model " + fmt(pair.model) + ", bs " + fmt(pair.bs) +
               ", n=" + std::to_string(pair.count) + "\n";

    out += "\n== by expiration month ==\n";
    for (auto& [month, pair] : r.by_expiration_month)
        out += month + ": model " + fmt(pair.model) + ", bs " + fmt(pair.bs) +
               ", n=" + std::to_string(pair.count) + "\n";

    out += "\n== 1-BRL premium brackets ==\n";
    for (auto& [bracket, pair] : r.by_bracket)
        out += "[" + std::to_string(bracket) + ", " + std::to_string(bracket + 1) +
               "): model " + fmt(pair.model) + ", bs " + fmt(pair.bs) +
               ", n=" + std::to_string(pair.count) + "\n";

    for (auto& [cat, ranking] : r.rankings) {
        out += "\n== tickers (" + std::string(to_string(cat)) + "), best " +
               std::to_string(ranking.best.size()) + " / worst " +
               std::to_string(ranking.worst.size()) + " ==\n";
        for (auto& t : ranking.best)
            out += "best  " + t.ticker + ": " + fmt(t.model_mae) + " (n=" +
                   std::to_string(t.count) + ")\n";
        for (auto& t : ranking.worst)
            out += "worst " + t.ticker + ": " + fmt(t.model_mae) + " (n=" +
                   std::to_string(t.count) + ")\n";
    }
    return out;
}

std::string daily_csv(const EvalReport& r) {
    std::string out = "date,actual_mean,model_mean,bs_mean,count\n";
    for (auto& d : r.daily) {
        out += d.date.to_iso() + "," + format_double(d.actual_mean) + "," +
               format_double(d.model_mean) + "," + format_double(d.bs_mean) + "," +
               std::to_string(d.count) + "\n";
    }
    return out;
}

std::string brackets_csv(const EvalReport& r) {
    std::string out = "bracket,model_mae,bs_mae,count\n";
    for (auto& [bracket, pair] : r.by_bracket)
        out += std::to_string(bracket) + "," + format_double(pair.model) + "," +
               format_double(pair.bs) + "," + std::to_string(pair.count) + "\n";
    return out;
}

std::string categories_csv(const EvalReport& r) {
    std::string out = "category,model_mae,bs_mae,count\n";
    for (auto& [cat, pair] : r.by_category)
        out += std::string(to_string(cat)) + "," + format_double(pair.model) + "," +
               format_double(pair.bs) + "," + std::to_string(pair.count) + "\n";
    return out;
}

std::string tickers_csv(const EvalReport& r) {
    std::string out = "category,rank_kind,rank,ticker,model_mae,count\n";
    for (auto& [cat, ranking] : r.rankings) {
        for (size_t i = 0; i < ranking.best.size(); ++i)
            out += std::string(to_string(cat)) + ",best," + std::to_string(i + 1) + "," +
                   ranking.best[i].ticker + "," + format_double(ranking.best[i].model_mae) + "," +
                   std::to_string(ranking.best[i].count) + "\n";
        for (size_t i = 0; i < ranking.worst.size(); ++i)
            out += std::string(to_string(cat)) + ",worst," + std::to_string(i + 1) + "," +
                   ranking.worst[i].ticker + "," + format_double(ranking.worst[i].model_mae) +
                   "," + std::to_string(ranking.worst[i].count) + "\n";
    }
    return out;
}

std::string months_csv(const EvalReport& r) {
    std::string out = "keying,month,model_mae,bs_mae,count\n";
    for (auto& [month, pair] : r.by_trade_month)
        out += "trade," + month + "," + format_double(pair.model) + "," + format_double(pair.bs) +
               "," + std::to_string(pair.count) + "\n";
    for (auto& [month, pair] : r.by_expiration_month)
        out += "expiration," + month + "," + format_double(pair.model) + "," +
               format_double(pair.bs) + "," + std::to_string(pair.count) + "\n";
    return out;
}

}  // namespace b3opt::eval
