#include "b3opt/cli/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "b3opt/cli/manifest.hpp"
#include "b3opt/core/csv.hpp"
#include "b3opt/core/errors.hpp"
#include "b3opt/core/num_format.hpp"
#include "b3opt/data/dataset.hpp"
#include "b3opt/data/synthetic.hpp"
#include "b3opt/eval/evaluate.hpp"
#include "b3opt/ingest/fetch.hpp"
#include "b3opt/ingest/zip.hpp"
#include "b3opt/net/serialize.hpp"
#include "b3opt/pricing/black_scholes.hpp"
#include "b3opt/train/search.hpp"
#include "b3opt/train/trainer.hpp"

namespace b3opt::cli {

namespace fs = std::filesystem;

namespace {

void ensure_parent_dir(const std::string& path) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

Eigen::VectorXd predict_rows(const net::Model& model,
                             std::span<const data::DatasetRow> rows) {
    train::TensorData tensors = train::to_tensors(rows);
    const Eigen::Index n = tensors.features.rows();
    const Eigen::Index chunk = 8192;
    Eigen::VectorXd pred(n);
    for (Eigen::Index start = 0; start < n; start += chunk) {
        Eigen::Index len = std::min(chunk, n - start);
        pred.segment(start, len) = net::predict(model, tensors.features.middleRows(start, len));
    }
    return pred;
}

std::string history_csv(const train::TrainReport& report) {
    std::string out = "epoch,train_loss,val_loss,improved\n";
    for (const auto& rec : report.history)
        out += std::to_string(rec.epoch) + "," + format_double(rec.train_loss) + "," +
               format_double(rec.val_loss) + "," + (rec.improved ? "1" : "0") + "\n";
    return out;
}

// ---- fetch ----------------------------------------------------------------

struct FetchArgs {
    std::string from, to, out;
    std::string base_url;
    int concurrency = 30;
    int retry_delay_ms = 500;
};

int run_fetch(const FetchArgs& args) {
    Date from = Date::parse_iso(args.from);
    Date to = Date::parse_iso(args.to);

    std::string base = args.base_url;
    if (base.empty()) {
        const char* env = std::getenv("B3_BASE_URL");
        base = env ? env : std::string(ingest::kDefaultBaseUrl);
    }

    fs::create_directories(fs::path(args.out) / "raw");
    fs::create_directories(fs::path(args.out) / "txt");

    ingest::FetchOptions options;
    options.concurrency = args.concurrency;
    options.base_url = base;
    options.retry_delay = std::chrono::milliseconds(args.retry_delay_ms);

    auto store = [&](Date date, const std::string& payload) {
        write_file((fs::path(args.out) / "raw" / ingest::archive_name(date)).string(), payload);
    };

    nlohmann::json manifest = make_manifest("fetch");
    manifest["config"] = {{"from", args.from},
                          {"to", args.to},
                          {"concurrency", args.concurrency},
                          {"base_url", base},
                          {"retry_delay_ms", args.retry_delay_ms}};

    ingest::FetchManifest fetched =
        ingest::fetch_archives(from, to, options, ingest::make_http_transport(), store);

    std::string report;
    size_t texts_written = 0;
    size_t extract_failures = 0;
    for (const auto& ds : fetched.statuses) {
        report += ds.date.to_iso();
        report += ' ';
        report += ingest::to_string(ds.status);
        if (ds.status == ingest::FetchStatus::success) {
            std::string payload =
                read_file((fs::path(args.out) / "raw" / ingest::archive_name(ds.date)).string());
            try {
                for (auto& [name, content] : ingest::extract_archive(payload, ds.date)) {
                    std::string lower = name;
                    for (char& c : lower) c = static_cast<char>(std::tolower(c));
                    if (!lower.ends_with(".txt")) continue;
                    write_file((fs::path(args.out) / "txt" / (ds.date.to_iso() + "_" + name)).string(),
                               content);
                    ++texts_written;
                }
            } catch (const ingest::ExtractError& e) {
                report += " extract-failure: ";
                report += e.what();
                ++extract_failures;
            }
        }
        report += '\n';
    }
    write_file((fs::path(args.out) / "fetch_report.txt").string(), report);

    manifest["outputs"] = {{"raw_dir", (fs::path(args.out) / "raw").string()},
                           {"txt_dir", (fs::path(args.out) / "txt").string()},
                           {"report", (fs::path(args.out) / "fetch_report.txt").string()}};
    manifest["summary"] = {{"success", fetched.count(ingest::FetchStatus::success)},
                           {"http_failure", fetched.count(ingest::FetchStatus::http_failure)},
                           {"invalid_payload", fetched.count(ingest::FetchStatus::invalid_payload)},
                           {"skipped_weekend", fetched.count(ingest::FetchStatus::skipped_weekend)},
                           {"texts_written", texts_written},
                           {"extract_failures", extract_failures}};
    finish_manifest(manifest, (fs::path(args.out) / "manifest.json").string());

    std::cout << "fetched " << fetched.count(ingest::FetchStatus::success) << "/"
              << fetched.statuses.size() << " dates, " << texts_written << " text files\n";
    return 0;
}

// ---- build-dataset ---------------------------------------------------------

struct BuildArgs {
    std::string options_dir, stock, selic, out;
};

int run_build(const BuildArgs& args) {
    data::BuildInputs inputs;
    inputs.stock = data::read_stock_csv(args.stock);
    inputs.selic = data::read_selic_csv(args.selic);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.options_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.size() > 11 && name[10] == '_') files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw InputError("no 'YYYY-MM-DD_*' option files found in " + args.options_dir);

    for (const auto& path : files) {
        Date trade_date = Date::parse_iso(path.filename().string().substr(0, 10));
        inputs.option_texts.emplace_back(trade_date, read_file(path.string()));
    }

    nlohmann::json manifest = make_manifest("build-dataset");
    manifest["config"] = {{"options_dir", args.options_dir},
                          {"stock", args.stock},
                          {"selic", args.selic}};

    data::BuildResult result = data::build_dataset(inputs);
    ensure_parent_dir(args.out);
    data::write_rows_csv(args.out, result.rows);

    const auto& rep = result.report;
    manifest["outputs"] = {{"dataset", args.out}};
    manifest["report"] = {{"files", rep.files},
                          {"body_lines", rep.body_lines},
                          {"parse_errors", rep.parse_errors},
                          {"parsed_quotes", rep.parsed_quotes},
                          {"filtered_out", rep.filtered_out},
                          {"dropped_no_market", rep.dropped_no_market},
                          {"dropped_no_rate", rep.dropped_no_rate},
                          {"rows", rep.rows}};
    finish_manifest(manifest, args.out + ".manifest.json");

    std::cout << "dataset rows: " << rep.rows << " (parse errors " << rep.parse_errors
              << ", filtered out " << rep.filtered_out << ")\n";
    return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
    size_t n = 1000;
    uint64_t seed = 42;
    double noise_sd = 0.05;
    std::string out;
};

int run_synth(const SynthArgs& args) {
    nlohmann::json manifest = make_manifest("synth");
    manifest["config"] = {{"n", args.n}, {"seed", args.seed}, {"noise_sd", args.noise_sd}};

    auto rows = data::generate_synthetic(args.n, args.seed, args.noise_sd);
    ensure_parent_dir(args.out);
    data::write_rows_csv(args.out, rows);

    manifest["outputs"] = {{"dataset", args.out}};
    finish_manifest(manifest, args.out + ".manifest.json");
    std::cout << "wrote " << rows.size() << " synthetic rows to " << args.out << "\n";
    return 0;
}

// ---- train -------------------------------------------------------------------

struct TrainArgs {
    std::string data, out;
    std::string cutoff = "2024-10-31";
    double val_fraction = 0.2;
    uint64_t seed = 42;
    train::TrainConfig config;
};

int run_train(const TrainArgs& args) {
    auto rows = data::read_rows_csv(args.data);
    data::SplitSpec spec{Date::parse_iso(args.cutoff), args.val_fraction, args.seed};
    data::Split split = data::split_dataset(std::move(rows), spec);

    nlohmann::json manifest = make_manifest("train");
    manifest["config"] = {{"data", args.data},
                          {"cutoff", args.cutoff},
                          {"val_fraction", args.val_fraction},
                          {"seed", args.seed},
                          {"lr", args.config.lr},
                          {"weight_decay", args.config.weight_decay},
                          {"batch_size", args.config.batch_size},
                          {"max_epochs", args.config.max_epochs},
                          {"patience", args.config.patience},
                          {"hidden", args.config.net.hidden_size},
                          {"dropout", args.config.net.dropout_p},
                          {"train_rows", split.train.size()},
                          {"val_rows", split.val.size()},
                          {"test_rows", split.test.size()}};

    train::TrainConfig config = args.config;
    config.shuffle_seed = args.seed;
    train::TrainResult result = train::train(split.train, split.val, config, args.seed);

    ensure_parent_dir(args.out);
    net::save_model(result.model, args.out);
    write_file(args.out + ".history.csv", history_csv(result.report));

    manifest["outputs"] = {{"model", args.out}, {"history", args.out + ".history.csv"}};
    manifest["result"] = {{"best_epoch", result.report.best_epoch},
                          {"best_val_loss", result.report.best_val_loss},
                          {"stopped_early", result.report.stopped_early},
                          {"epochs_run", result.report.history.size()},
                          {"wall_seconds", result.report.wall_seconds}};
    finish_manifest(manifest, args.out + ".manifest.json");

    std::cout << "best epoch " << result.report.best_epoch << ", val loss "
              << format_double(result.report.best_val_loss) << ", epochs run "
              << result.report.history.size() << (result.report.stopped_early ? " (early stop)" : "")
              << "\n";
    return 0;
}

// ---- search -------------------------------------------------------------------

struct SearchArgs {
    std::string data, out;
    std::string cutoff = "2024-10-31";
    double val_fraction = 0.2;
    uint64_t seed = 42;
    int trials = 20;
    int epochs_per_trial = 10;
    int batch_size = 1024;
};

int run_search(const SearchArgs& args) {
    auto rows = data::read_rows_csv(args.data);
    data::SplitSpec spec{Date::parse_iso(args.cutoff), args.val_fraction, args.seed};
    data::Split split = data::split_dataset(std::move(rows), spec);

    nlohmann::json manifest = make_manifest("search");
    manifest["config"] = {{"data", args.data},       {"cutoff", args.cutoff},
                          {"val_fraction", args.val_fraction}, {"seed", args.seed},
                          {"trials", args.trials},   {"epochs_per_trial", args.epochs_per_trial},
                          {"batch_size", args.batch_size}};

    train::SearchSpace space;
    space.trials = args.trials;
    space.epochs_per_trial = args.epochs_per_trial;
    train::TrainConfig base;
    base.batch_size = args.batch_size;
    base.shuffle_seed = args.seed;

    train::SearchResult result =
        train::hyperparameter_search(space, split.train, split.val, base, args.seed);

    fs::create_directories(args.out);
    std::string trials = "trial,lr,hidden,dropout,weight_decay,failed,best_val_loss\n";
    std::string epochs = "trial,epoch,train_loss,val_loss\n";
    for (const auto& t : result.trials) {
        trials += std::to_string(t.index) + "," + format_double(t.lr) + "," +
                  std::to_string(t.hidden_size) + "," + format_double(t.dropout_p) + "," +
                  format_double(t.weight_decay) + "," + (t.failed ? "1" : "0") + "," +
                  (t.failed ? "" : format_double(t.best_val_loss)) + "\n";
        for (const auto& e : t.history)
            epochs += std::to_string(t.index) + "," + std::to_string(e.epoch) + "," +
                      format_double(e.train_loss) + "," + format_double(e.val_loss) + "\n";
    }
    write_file((fs::path(args.out) / "trials.csv").string(), trials);
    write_file((fs::path(args.out) / "trial_epochs.csv").string(), epochs);

    // Loadable straight back into `train --config`.
    std::string best = "lr=" + format_double(result.best.lr) + "\n" +
                       "hidden=" + std::to_string(result.best.net.hidden_size) + "\n" +
                       "dropout=" + format_double(result.best.net.dropout_p) + "\n" +
                       "weight-decay=" + format_double(result.best.weight_decay) + "\n";
    write_file((fs::path(args.out) / "best_config.ini").string(), best);

    manifest["outputs"] = {{"trials", (fs::path(args.out) / "trials.csv").string()},
                           {"trial_epochs", (fs::path(args.out) / "trial_epochs.csv").string()},
                           {"best_config", (fs::path(args.out) / "best_config.ini").string()}};
    manifest["result"] = {{"best_trial", result.best_trial},
                          {"best_lr", result.best.lr},
                          {"best_hidden", result.best.net.hidden_size},
                          {"best_dropout", result.best.net.dropout_p},
                          {"best_weight_decay", result.best.weight_decay}};
    finish_manifest(manifest, (fs::path(args.out) / "manifest.json").string());

    std::cout << "best trial " << result.best_trial << ": lr " << format_double(result.best.lr)
              << ", hidden " << result.best.net.hidden_size << ", dropout "
              << format_double(result.best.net.dropout_p) << ", wd "
              << format_double(result.best.weight_decay) << "\n";
    return 0;
}

// ---- evaluate ------------------------------------------------------------------

struct EvalArgs {
    std::string data, model, out;
    std::string split = "test";
    std::string cutoff = "2024-10-31";
    double val_fraction = 0.2;
    uint64_t seed = 42;
};

int run_evaluate(const EvalArgs& args) {
    auto rows = data::read_rows_csv(args.data);
    data::SplitSpec spec{Date::parse_iso(args.cutoff), args.val_fraction, args.seed};
    data::Split split = data::split_dataset(std::move(rows), spec);
    const std::vector<data::DatasetRow>& selected =
        args.split == "val" ? split.val : split.test;
    if (selected.empty()) throw InputError("selected split '" + args.split + "' is empty");

    nlohmann::json manifest = make_manifest("evaluate");
    manifest["config"] = {{"data", args.data},     {"model", args.model},
                          {"split", args.split},   {"cutoff", args.cutoff},
                          {"val_fraction", args.val_fraction}, {"seed", args.seed},
                          {"rows", selected.size()}};

    std::vector<double> predictions(selected.size());
    if (args.model == "bs") {
        for (size_t i = 0; i < selected.size(); ++i) predictions[i] = selected[i].bs_price;
    } else {
        net::Model model = net::load_model(args.model);
        Eigen::VectorXd pred = predict_rows(model, selected);
        for (size_t i = 0; i < selected.size(); ++i) predictions[i] = pred[static_cast<Eigen::Index>(i)];
    }

    eval::EvalReport report = eval::evaluate(selected, predictions);

    fs::create_directories(args.out);
    write_file((fs::path(args.out) / "report.txt").string(), eval::report_text(report));
    write_file((fs::path(args.out) / "daily_avg.csv").string(), eval::daily_csv(report));
    write_file((fs::path(args.out) / "brackets.csv").string(), eval::brackets_csv(report));
    write_file((fs::path(args.out) / "categories.csv").string(), eval::categories_csv(report));
    write_file((fs::path(args.out) / "tickers.csv").string(), eval::tickers_csv(report));
    write_file((fs::path(args.out) / "months.csv").string(), eval::months_csv(report));

    manifest["outputs"] = {{"report", (fs::path(args.out) / "report.txt").string()}};
    manifest["result"] = {{"model_mae", report.overall.model}, {"bs_mae", report.overall.bs}};
    if (!report.range.empty) {
        manifest["result"]["range_model_mae"] = report.range.in_range.model;
        manifest["result"]["range_bs_mae"] = report.range.in_range.bs;
        manifest["result"]["range_share"] = report.range.share;
    }
    finish_manifest(manifest, (fs::path(args.out) / "manifest.json").string());

    std::cout << "rows " << report.overall.count << ": model MAE "
              << format_double(report.overall.model) << ", bs MAE "
              << format_double(report.overall.bs) << "\n";
    return 0;
}

// ---- price ---------------------------------------------------------------------

struct PriceArgs {
    double spot = 0, strike = 0, rate = 0, sigma = 0, tte = 0;
};

int run_price(const PriceArgs& args) {
    double price = pricing::call_price({args.spot, args.strike, args.rate, args.sigma, args.tte});
    std::cout << format_double(price) << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"B3 option pipeline: ingest, price, train, evaluate"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    FetchArgs fetch_args;
    auto* fetch = app.add_subcommand("fetch", "Download and extract B3 daily option archives");
    fetch->add_option("--from", fetch_args.from, "First date, YYYY-MM-DD")->required();
    fetch->add_option("--to", fetch_args.to, "Last date, YYYY-MM-DD")->required();
    fetch->add_option("--concurrency", fetch_args.concurrency, "Max in-flight downloads")
        ->default_val(30)
        ->check(CLI::PositiveNumber);
    fetch->add_option("--out", fetch_args.out, "Output directory")->required();
    fetch->add_option("--base-url", fetch_args.base_url,
                      "Override the exchange base URL (default: $B3_BASE_URL or the B3 site)");
    fetch->add_option("--retry-delay-ms", fetch_args.retry_delay_ms, "Delay before the one retry")
        ->default_val(500);
    fetch->set_config("--config");

    BuildArgs build_args;
    auto* build = app.add_subcommand("build-dataset", "Join option, stock and SELIC data");
    build->add_option("--options-dir", build_args.options_dir, "Directory of YYYY-MM-DD_*.txt files")
        ->required();
    build->add_option("--stock", build_args.stock, "Stock CSV (date,close)")->required();
    build->add_option("--selic", build_args.selic, "SELIC CSV (date,annual_rate_percent)")
        ->required();
    build->add_option("--out", build_args.out, "Output dataset CSV")->required();
    build->set_config("--config");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--n", synth_args.n, "Row count")->required()->check(CLI::PositiveNumber);
    synth->add_option("--seed", synth_args.seed, "RNG seed")->default_val(42);
    synth->add_option("--noise-sd", synth_args.noise_sd, "Premium noise standard deviation, BRL")
        ->default_val(0.05);
    synth->add_option("--out", synth_args.out, "Output dataset CSV")->required();
    synth->set_config("--config");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train the residual network");
    train_cmd->add_option("--data", train_args.data, "Dataset CSV")->required();
    train_cmd->add_option("--cutoff", train_args.cutoff, "Train/test cutoff date")
        ->default_val("2024-10-31");
    train_cmd->add_option("--val-fraction", train_args.val_fraction, "Validation fraction")
        ->default_val(0.2);
    train_cmd->add_option("--seed", train_args.seed, "Seed for split, init and dropout")
        ->default_val(42);
    train_cmd->add_option("--lr", train_args.config.lr, "Adam learning rate")->default_val(5.74e-5);
    train_cmd->add_option("--weight-decay", train_args.config.weight_decay, "L2 weight decay")
        ->default_val(1.93e-4);
    train_cmd->add_option("--batch-size", train_args.config.batch_size, "Minibatch size")
        ->default_val(1024);
    train_cmd->add_option("--max-epochs", train_args.config.max_epochs, "Epoch budget")
        ->default_val(25);
    train_cmd->add_option("--patience", train_args.config.patience, "Early-stop patience")
        ->default_val(5);
    train_cmd->add_option("--hidden", train_args.config.net.hidden_size, "Hidden layer width")
        ->default_val(256);
    train_cmd->add_option("--dropout", train_args.config.net.dropout_p, "Dropout probability")
        ->default_val(0.2414);
    train_cmd->add_option("--out", train_args.out, "Output model artifact path")->required();
    train_cmd->set_config("--config");

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Random hyperparameter search");
    search->add_option("--data", search_args.data, "Dataset CSV")->required();
    search->add_option("--trials", search_args.trials, "Trial count")->default_val(20);
    search->add_option("--seed", search_args.seed, "RNG seed")->default_val(42);
    search->add_option("--cutoff", search_args.cutoff, "Train/test cutoff date")
        ->default_val("2024-10-31");
    search->add_option("--val-fraction", search_args.val_fraction, "Validation fraction")
        ->default_val(0.2);
    search->add_option("--epochs-per-trial", search_args.epochs_per_trial, "Epochs per trial")
        ->default_val(10);
    search->add_option("--batch-size", search_args.batch_size, "Minibatch size")->default_val(1024);
    search->add_option("--out", search_args.out, "Output directory")->required();
    search->set_config("--config");

    EvalArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "MAE reports for a trained model");
    evaluate->add_option("--data", eval_args.data, "Dataset CSV")->required();
    evaluate->add_option("--model", eval_args.model, "Model artifact path, or 'bs' for the baseline")
        ->required();
    evaluate->add_option("--split", eval_args.split, "Which split to evaluate")
        ->default_val("test")
        ->check(CLI::IsMember({"test", "val"}));
    evaluate->add_option("--cutoff", eval_args.cutoff, "Train/test cutoff date")
        ->default_val("2024-10-31");
    evaluate->add_option("--val-fraction", eval_args.val_fraction, "Validation fraction")
        ->default_val(0.2);
    evaluate->add_option("--seed", eval_args.seed, "Split shuffle seed (match training)")
        ->default_val(42);
    evaluate->add_option("--out", eval_args.out, "Output directory")->required();
    evaluate->set_config("--config");

    PriceArgs price_args;
    auto* price = app.add_subcommand("price", "Closed-form European call price");
    price->add_option("--spot", price_args.spot, "Spot price S")->required();
    price->add_option("--strike", price_args.strike, "Strike K")->required();
    price->add_option("--rate", price_args.rate, "Risk-free rate, annual fraction")->required();
    price->add_option("--sigma", price_args.sigma, "Volatility, annual fraction")->required();
    price->add_option("--tte", price_args.tte, "Time to expiry, years")->required();

    try {
        app.parse(argc, argv);
        if (*fetch) return run_fetch(fetch_args);
        if (*build) return run_build(build_args);
        if (*synth) return run_synth(synth_args);
        if (*train_cmd) return run_train(train_args);
        if (*search) return run_search(search_args);
        if (*evaluate) return run_evaluate(eval_args);
        if (*price) return run_price(price_args);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 5;
    } catch (const InputError& e) {
        std::cerr << "error: input: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace b3opt::cli
