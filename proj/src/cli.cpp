#include "vrcmf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "vrcmf/config.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"
#include "vrcmf/glove.hpp"
#include "vrcmf/grid_search.hpp"
#include "vrcmf/metrics.hpp"
#include "vrcmf/model_io.hpp"
#include "vrcmf/ratings.hpp"
#include "vrcmf/report.hpp"
#include "vrcmf/side_data.hpp"
#include "vrcmf/trainer.hpp"
#include "vrcmf/user_cf.hpp"
#include "vrcmf/visual.hpp"
#include "vrcmf/vocabulary.hpp"

namespace fs = std::filesystem;

namespace vrcmf {

namespace {

std::ofstream open_output(const fs::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    for (auto part : split(text, ",")) {
        auto v = parse_double(trim(part));
        if (!v || !(*v > 0.0)) throw Error("grid values must be positive numbers, got '" + std::string(part) + "'");
        out.push_back(*v);
    }
    return out;
}

// Flags that mirror config keys. Values are applied through apply_setting so
// a flag and a config line behave identically; flags are applied last.
struct ConfigFlag {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr ConfigFlag kConfigFlags[] = {
    {"--variant", "variant", "PMF, ConvMF, ConvMF+, RConvMF, VConvMF or VRConvMF"},
    {"-k,--dim", "k", "latent dimension"},
    {"--lambda-u", "lambda_u", "user regularization"},
    {"--lambda-v", "lambda_v", "item regularization"},
    {"--lambda-w", "lambda_w", "network weight regularization"},
    {"--confidence", "confidence", "confidence weighting on/off"},
    {"--alpha", "alpha", "confidence strength"},
    {"--distance", "distance", "confidence distance: absolute or square"},
    {"--r-max", "r_max", "largest rating value"},
    {"--iterations", "iterations", "alternating iterations"},
    {"--repeats", "repeats", "independent runs with fresh splits"},
    {"--learning-rate", "learning_rate", "network learning rate"},
    {"--batch-size", "batch_size", "network mini-batch size"},
    {"--dropout", "dropout", "dropout rate on the pooled text vector"},
    {"--network-epochs", "network_epochs", "network epochs per iteration"},
    {"--embed-dim", "embed_dim", "word embedding width"},
    {"--context-window", "context_window", "RCNN context window (odd)"},
    {"--vocab-cap", "vocab_cap", "vocabulary size cap"},
    {"--max-doc-length", "max_doc_length", "tokens kept per document"},
    {"--glove", "glove_warm_start", "warm-start embeddings with GloVe on/off"},
    {"--glove-epochs", "glove_epochs", "GloVe epochs"},
    {"--levels", "visual_levels", "visual pooling levels, e.g. 2,3,4,5"},
    {"--clamp", "clamp", "clamp predictions to [1, r_max] on/off"},
};

struct ConfigOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    std::map<std::string, CLI::Option*> options;
    std::uint64_t seed = 1;
    CLI::Option* seed_option = nullptr;
    std::size_t threads = 1;
    CLI::Option* threads_option = nullptr;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "key = value settings file");
        app.add_option("--set", sets, "override one setting, key=value (repeatable)");
        for (const auto& f : kConfigFlags) options[f.key] = app.add_option(f.flag, flags[f.key], f.help);
        seed_option = app.add_option("--seed", seed, "base seed for every random stream");
        threads_option = app.add_option("--threads", threads, "worker threads for sweeps (1 = bit-exact)");
    }

    TrainConfig resolve() const {
        TrainConfig config;
        if (!config_path.empty()) load_config(config_path, config);
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw Error("--set expects key=value, got '" + s + "'");
            apply_setting(config, std::string_view(s).substr(0, eq), std::string_view(s).substr(eq + 1));
        }
        for (const auto& [key, opt] : options)
            if (opt->count()) apply_setting(config, key, flags.at(key));
        if (seed_option->count()) config.seed = seed;
        if (threads_option->count()) config.threads = threads;
        config.validate();
        return config;
    }
};

struct DataOptions {
    std::string ratings;
    std::string format = "double-colon";
    std::string documents;
    std::string stopwords;
    std::string vocab;
    std::string embeddings;
    std::string features;

    void attach(CLI::App& app) {
        app.add_option("--ratings", ratings, "ratings file")->required();
        app.add_option("--format", format, "ratings separator: double-colon, tab or comma");
        app.add_option("--documents", documents, "item_id<TAB>text file");
        app.add_option("--stopwords", stopwords, "one stopword per line");
        app.add_option("--vocab", vocab, "vocabulary from prep-text");
        app.add_option("--embeddings", embeddings, "word vectors from prep-text (needs --vocab)");
        app.add_option("--features", features, "#vrcmf-feat v1 visual feature file");
    }
};

struct Prepared {
    RatingsDataset data;
    ItemSideData side;
    std::optional<Eigen::MatrixXd> embeddings;
};

Prepared prepare(const DataOptions& opts, const TrainConfig& config, std::ostream& err) {
    Prepared p;
    p.data = parse_ratings(opts.ratings, parse_ratings_format(opts.format), config.confidence_params.r_max);
    if (!learns_prior(config.variant)) return p;

    if (opts.documents.empty())
        throw Error(std::string(to_string(config.variant)) + " needs --documents");
    const auto docs = read_documents(opts.documents);
    const auto stop = opts.stopwords.empty() ? std::set<std::string>{} : read_stopwords(opts.stopwords);

    Vocabulary vocab;
    if (!opts.vocab.empty()) {
        std::ifstream in(opts.vocab, std::ios::binary);
        if (!in) throw Error("cannot open vocabulary '" + opts.vocab + "'");
        vocab = load_vocabulary(in, opts.vocab);
    } else {
        vocab = build_vocabulary(docs, config.vocab_cap, stop, config.max_doc_length).vocabulary;
    }
    const auto encoded = encode_documents(docs, vocab, stop);

    if (!opts.embeddings.empty()) {
        if (opts.vocab.empty()) throw Error("--embeddings needs the matching --vocab");
        std::ifstream in(opts.embeddings, std::ios::binary);
        if (!in) throw Error("cannot open embeddings '" + opts.embeddings + "'");
        p.embeddings = load_embeddings(in, opts.embeddings);
    } else if (config.glove_warm_start) {
        std::vector<TokenSequence> seqs;
        for (const auto& [id, seq] : encoded) seqs.push_back(seq);
        auto co = build_cooccurrence(seqs, config.glove_window);
        GloveConfig gc{config.embed_dim, config.glove_x_max, config.glove_beta, config.glove_epochs,
                       config.glove_learning_rate, derive_seed(config.seed, SeedStream::glove)};
        p.embeddings = train_glove(co, vocab.size(), gc).table.word_vectors();
    }

    std::optional<FeatureMapTable> features;
    if (uses_visual(config.variant)) {
        if (opts.features.empty()) throw Error(std::string(to_string(config.variant)) + " needs --features");
        features = load_feature_maps(opts.features);
    }
    SideDataSummary summary;
    p.side = build_side_data(p.data.items, vocab.size(), encoded, features ? &*features : nullptr,
                             config.visual_levels, &summary);
    for (const auto& w : describe(summary)) err << "warning: " << w << '\n';
    return p;
}

struct RunSplit {
    RatingsMatrix train;
    RatingsMatrix validation;
    RatingsMatrix test;
};

RunSplit make_split(const RatingsMatrix& all, std::uint64_t run_seed) {
    auto split = split_dataset(all, {}, derive_seed(run_seed, SeedStream::split));
    return {all.subset(split.train), all.subset(split.validation), all.subset(split.test)};
}

std::uint64_t run_seed(std::uint64_t base, std::size_t run) { return derive_seed(base, 100 + run); }

// ---- subcommands --------------------------------------------------------

int cmd_stats(const std::string& path, const std::string& format, double r_max, std::string name,
              std::ostream& out) {
    auto data = parse_ratings(path, parse_ratings_format(format), r_max);
    if (name.empty()) name = fs::path(path).filename().string();
    write_stats_report(out, name, sparsity_stats(data.matrix));
    return 0;
}

struct PrepTextOptions {
    std::string documents;
    std::string stopwords;
    std::string out_dir;
    std::size_t vocab_cap = 6000;
    std::size_t max_len = 400;
    bool glove = false;
    GloveConfig glove_config;
    std::size_t window = 50;
};

int cmd_prep_text(const PrepTextOptions& o, std::ostream& out, std::ostream& err) {
    const auto docs = read_documents(o.documents);
    const auto stop = o.stopwords.empty() ? std::set<std::string>{} : read_stopwords(o.stopwords);
    auto result = build_vocabulary(docs, o.vocab_cap, stop, o.max_len);
    const auto empty = static_cast<std::size_t>(std::count(result.empty.begin(), result.empty.end(), true));
    if (empty) err << "warning: " << empty << " document(s) have no in-vocabulary token\n";

    const fs::path dir(o.out_dir);
    ensure_directory(dir);
    {
        auto f = open_output(dir / "vocab.bin", true);
        save_vocabulary(f, result.vocabulary);
    }
    out << "documents=" << docs.size() << '\n' << "vocabulary=" << result.vocabulary.size() << '\n';
    if (!o.glove) return 0;

    auto co = build_cooccurrence(result.sequences, o.window);
    auto glove = train_glove(co, result.vocabulary.size(), o.glove_config);
    const auto vectors = glove.table.word_vectors();
    {
        auto f = open_output(dir / "embeddings.bin", true);
        save_embeddings(f, vectors);
    }
    {
        auto f = open_output(dir / "embeddings.txt");
        export_embeddings_text(f, result.vocabulary, vectors);
    }
    {
        auto f = open_output(dir / "glove_loss.csv");
        f << "epoch,loss\n";
        for (std::size_t e = 0; e < glove.loss.size(); ++e) f << e << ',' << format_fixed(glove.loss[e], 6) << '\n';
    }
    out << "cooccurrences=" << co.entries.size() << '\n'
        << "glove_loss_initial=" << format_fixed(glove.loss.front(), 6) << '\n'
        << "glove_loss_final=" << format_fixed(glove.loss.back(), 6) << '\n';
    return 0;
}

ModelArtifact to_artifact(TrainedModel model, const RatingsDataset& data, const ItemSideData& side) {
    ModelArtifact a;
    a.config = model.config;
    a.users = data.users;
    a.items = data.items;
    a.factors = std::move(model.factors);
    a.network = std::move(model.network);
    a.vocab_size = side.vocab_size;
    a.visual_dim = side.visual_dim;
    a.best_iteration = model.best_iteration;
    return a;
}

int cmd_train(const DataOptions& data_opts, const ConfigOptions& cfg_opts, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
    const auto config = cfg_opts.resolve();
    auto prepared = prepare(data_opts, config, err);
    const fs::path dir(out_dir);
    ensure_directory(dir);

    auto summary = open_output(dir / "summary.csv");
    summary << "run,seed,best_iter,val_rmse,test_rmse\n";
    double test_sum = 0.0;
    for (std::size_t r = 1; r <= config.repeats; ++r) {
        TrainConfig run_config = config;
        run_config.seed = run_seed(config.seed, r);
        auto split = make_split(prepared.data.matrix, run_config.seed);

        FitOptions options;
        if (prepared.embeddings) options.embeddings = &*prepared.embeddings;
        auto model = fit(split.train, &split.validation, prepared.side, run_config, options);
        const double val = evaluate_rmse(model.factors, split.validation, config.clamp);
        const double test = evaluate_rmse(model.factors, split.test, config.clamp);
        test_sum += test;

        const fs::path run_dir = dir / ("run-" + std::to_string(r));
        ensure_directory(run_dir);
        {
            auto f = open_output(run_dir / "train_log.csv");
            write_training_log(f, model.log);
        }
        const auto& ids = prepared.data;
        for (auto [name, matrix] : {std::pair{"train.tsv", &split.train}, std::pair{"validation.tsv", &split.validation},
                                    std::pair{"test.tsv", &split.test}}) {
            auto f = open_output(run_dir / name);
            write_ratings(f, *matrix, ids.users, ids.items, RatingsFormat::tab);
        }
        const auto best = model.best_iteration;
        {
            auto f = open_output(run_dir / "model.bin", true);
            save_model(f, to_artifact(std::move(model), prepared.data, prepared.side));
        }
        summary << r << ',' << run_config.seed << ',' << best << ',' << format_fixed(val, 6) << ','
                << format_fixed(test, 6) << '\n';
        out << "run " << r << ": best_iter=" << best << " val_rmse=" << format_fixed(val, 4)
            << " test_rmse=" << format_fixed(test, 4) << '\n';
    }
    out << to_string(config.variant) << " mean test RMSE " << format_fixed(test_sum / static_cast<double>(config.repeats), 4)
        << " over " << config.repeats << " run(s)\n";
    return 0;
}

struct EvalRun {
    fs::path model;
    fs::path test;
    fs::path train;
};

std::vector<EvalRun> discover_runs(const std::string& path, const std::string& explicit_test) {
    const fs::path p(path);
    std::vector<EvalRun> runs;
    auto add_dir = [&](const fs::path& d) { runs.push_back({d / "model.bin", d / "test.tsv", d / "train.tsv"}); };
    if (fs::is_regular_file(p)) {
        if (explicit_test.empty()) throw Error("'" + path + "' is a model file; pass --test");
        runs.push_back({p, explicit_test, {}});
        return runs;
    }
    if (!fs::is_directory(p)) throw Error("no such model or run directory '" + path + "'");
    if (fs::exists(p / "model.bin")) {
        add_dir(p);
    } else {
        std::vector<std::pair<long, fs::path>> found;
        for (const auto& e : fs::directory_iterator(p)) {
            const auto name = e.path().filename().string();
            if (e.is_directory() && name.rfind("run-", 0) == 0 && fs::exists(e.path() / "model.bin"))
                found.emplace_back(std::stol(name.substr(4)), e.path());
        }
        std::sort(found.begin(), found.end());
        for (const auto& [n, d] : found) add_dir(d);
    }
    if (runs.empty()) throw Error("no trained runs under '" + path + "'");
    if (!explicit_test.empty())
        for (auto& r : runs) r.test = explicit_test;
    return runs;
}

RatingsMatrix read_heldout(const fs::path& path, const std::string& format, const ModelArtifact& m) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open held-out ratings '" + path.string() + "'");
    return parse_ratings_with_ids(in, parse_ratings_format(format), m.users, m.items,
                                  m.config.confidence_params.r_max, path.string());
}

struct EvaluateOptions {
    std::vector<std::string> models;
    std::string test;
    std::string format = "tab";
    std::string baseline;
    bool clamp = false;
    std::size_t user_cf = 0;
    bool global_mean = false;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
    std::vector<ReportRow> rows;
    ReportRow cf_row{"UserCF", {}}, mean_row{"GlobalMean", {}};
    auto row_for = [&](const std::string& name) -> ReportRow& {
        for (auto& r : rows)
            if (r.name == name) return r;
        rows.push_back({name, {}});
        return rows.back();
    };
    for (const auto& path : o.models) {
        const auto runs = discover_runs(path, o.test);
        // A second directory with the same variant gets its own row.
        std::string name;
        for (const auto& run : runs) {
            auto model = load_model(run.model.string());
            if (name.empty()) {
                name = std::string(to_string(model.config.variant));
                if (std::any_of(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.name == name; }))
                    name += " (" + path + ")";
            }
            const auto test = read_heldout(run.test, o.format, model);
            row_for(name).rmse.push_back(evaluate_rmse(model.factors, test, o.clamp || model.config.clamp));
            if ((o.user_cf || o.global_mean) && !run.train.empty() && fs::exists(run.train)) {
                const auto train = read_heldout(run.train, "tab", model);
                if (o.user_cf) cf_row.rmse.push_back(baseline_user_cf(train, test, o.user_cf));
                if (o.global_mean) mean_row.rmse.push_back(baseline_global_mean(train, test));
            }
        }
    }
    if (o.user_cf && !cf_row.rmse.empty()) rows.insert(rows.begin(), cf_row);
    if (o.global_mean && !mean_row.rmse.empty()) rows.insert(rows.begin(), mean_row);
    emit_report(out, rows, o.baseline);
    return 0;
}

struct GridOptions {
    std::string lambda_u_grid;
    std::string lambda_v_grid;
    bool exhaustive = false;
    std::string out_path;
};

int cmd_grid(const DataOptions& data_opts, const ConfigOptions& cfg_opts, const GridOptions& g,
             std::ostream& out, std::ostream& err) {
    const auto config = cfg_opts.resolve();
    auto prepared = prepare(data_opts, config, err);
    TrainConfig run_config = config;
    run_config.seed = run_seed(config.seed, 1);
    auto split = make_split(prepared.data.matrix, run_config.seed);
    const auto lu = g.lambda_u_grid.empty() ? default_lambda_grid() : parse_grid(g.lambda_u_grid);
    const auto lv = g.lambda_v_grid.empty() ? default_lambda_grid() : parse_grid(g.lambda_v_grid);
    FitOptions options;
    if (prepared.embeddings) options.embeddings = &*prepared.embeddings;
    auto result = grid_search(split.train, split.validation, prepared.side, lu, lv, run_config,
                              g.exhaustive ? GridMode::exhaustive : GridMode::independent, options);
    if (!g.out_path.empty()) {
        auto f = open_output(g.out_path);
        write_surface(f, result);
    } else {
        write_surface(out, result);
    }
    out << "best lambda_u=" << format_roundtrip(result.best_lambda_u)
        << " lambda_v=" << format_roundtrip(result.best_lambda_v)
        << " val_rmse=" << format_fixed(result.best_val_rmse, 4) << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input, const std::string& output, bool clamp,
                std::ostream& out) {
    const auto model = load_model(model_path);
    std::ifstream file;
    std::istream* in = &std::cin;
    if (input != "-") {
        file.open(input);
        if (!file) throw Error("cannot open '" + input + "'");
        in = &file;
    }
    std::ofstream out_file;
    std::ostream* sink = &out;
    if (!output.empty() && output != "-") {
        out_file = open_output(output);
        sink = &out_file;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split(line, "\t");
        if (fields.size() < 2) throw ParseError(input, line_no, "expected user_id<TAB>item_id");
        const std::string user(trim(fields[0])), item(trim(fields[1]));
        *sink << user << '\t' << item << '\t'
              << format_fixed(model.predict(user, item, clamp || model.config.clamp), 6) << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rating prediction with text and visual item priors"};
    app.name("vrcmf");
    app.require_subcommand(1, 1);

    std::string ratings, format = "double-colon", name;
    double r_max = 5.0;
    auto* stats = app.add_subcommand("stats", "dataset statistics");
    stats->add_option("--ratings", ratings, "ratings file")->required();
    stats->add_option("--format", format, "double-colon, tab or comma");
    stats->add_option("--r-max", r_max, "largest rating value");
    stats->add_option("--name", name, "dataset label");

    PrepTextOptions prep;
    auto* prep_cmd = app.add_subcommand("prep-text", "build a vocabulary and optional GloVe embeddings");
    prep_cmd->add_option("--documents", prep.documents, "item_id<TAB>text file")->required();
    prep_cmd->add_option("--stopwords", prep.stopwords, "one stopword per line");
    prep_cmd->add_option("--out", prep.out_dir, "output directory")->required();
    prep_cmd->add_option("--vocab-cap", prep.vocab_cap, "vocabulary size cap");
    prep_cmd->add_option("--max-doc-length", prep.max_len, "tokens kept per document");
    prep_cmd->add_flag("--glove", prep.glove, "train GloVe embeddings");
    prep_cmd->add_option("--embed-dim", prep.glove_config.dim, "embedding width");
    prep_cmd->add_option("--window", prep.window, "co-occurrence window");
    prep_cmd->add_option("--epochs", prep.glove_config.epochs, "GloVe epochs");
    prep_cmd->add_option("--x-max", prep.glove_config.x_max, "weighting cutoff");
    prep_cmd->add_option("--beta", prep.glove_config.beta, "weighting exponent");
    prep_cmd->add_option("--learning-rate", prep.glove_config.learning_rate, "adagrad learning rate");
    std::uint64_t prep_seed = 1;
    prep_cmd->add_option("--seed", prep_seed, "base seed");

    DataOptions train_data;
    ConfigOptions train_cfg;
    std::string train_out;
    auto* train = app.add_subcommand("train", "train a model; writes artifacts per run");
    train_data.attach(*train);
    train_cfg.attach(*train);
    train->add_option("--out", train_out, "output directory")->required();

    EvaluateOptions eval;
    auto* evaluate = app.add_subcommand("evaluate", "RMSE report over trained runs");
    evaluate->add_option("models", eval.models, "train output directories, run directories or model files")
        ->required();
    evaluate->add_option("--test", eval.test, "held-out ratings (default: each run's test.tsv)");
    evaluate->add_option("--format", eval.format, "format of --test");
    evaluate->add_option("--baseline", eval.baseline, "row used for the improvement column");
    evaluate->add_flag("--clamp", eval.clamp, "clamp predictions to [1, r_max]");
    evaluate->add_option("--user-cf", eval.user_cf, "add a UserCF row with this many neighbours");
    evaluate->add_flag("--global-mean", eval.global_mean, "add a global-mean row");

    DataOptions grid_data;
    ConfigOptions grid_cfg;
    GridOptions grid;
    auto* grid_cmd = app.add_subcommand("grid-search", "validation RMSE over lambda_u and lambda_v");
    grid_data.attach(*grid_cmd);
    grid_cfg.attach(*grid_cmd);
    grid_cmd->add_option("--lambda-u-grid", grid.lambda_u_grid, "comma-separated values");
    grid_cmd->add_option("--lambda-v-grid", grid.lambda_v_grid, "comma-separated values");
    grid_cmd->add_flag("--exhaustive", grid.exhaustive, "full cross product instead of two 1-D sweeps");
    grid_cmd->add_option("--out", grid.out_path, "surface CSV (default: stdout)");

    std::string model_path, input = "-", output;
    bool clamp = false;
    auto* predict_cmd = app.add_subcommand("predict", "score user_id<TAB>item_id pairs");
    predict_cmd->add_option("--model", model_path, "model.bin")->required();
    predict_cmd->add_option("--input", input, "pairs file, - for stdin");
    predict_cmd->add_option("--output", output, "output file (default: stdout)");
    predict_cmd->add_flag("--clamp", clamp, "clamp predictions to [1, r_max]");

    if (!args.empty() && !args.front().empty() && args.front()[0] != '-') {
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args.front(); })) {
            err << "error: unknown subcommand '" << args.front() << "'\n" << app.help();
            return 2;
        }
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (stats->parsed()) return cmd_stats(ratings, format, r_max, name, out);
        if (prep_cmd->parsed()) {
            prep.glove_config.seed = derive_seed(prep_seed, SeedStream::glove);
            return cmd_prep_text(prep, out, err);
        }
        if (train->parsed()) return cmd_train(train_data, train_cfg, train_out, out, err);
        if (evaluate->parsed()) return cmd_evaluate(eval, out);
        if (grid_cmd->parsed()) return cmd_grid(grid_data, grid_cfg, grid, out, err);
        if (predict_cmd->parsed()) return cmd_predict(model_path, input, output, clamp, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace vrcmf
