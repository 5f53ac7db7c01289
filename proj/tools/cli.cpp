#include "cli.hpp"

#include "run_config.hpp"

#include "gbtwin/dataio.hpp"
#include "gbtwin/evaluation.hpp"
#include "gbtwin/granulation.hpp"
#include "gbtwin/model_io.hpp"
#include "gbtwin/normalize.hpp"
#include "gbtwin/statistics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gbtwin::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

char parse_delimiter(const std::string& d) {
    if (d == "tab" || d == "\\t") {
        return '\t';
    }
    if (d == "space") {
        return ' ';
    }
    if (d.size() != 1) {
        throw UsageError("delimiter must be one character, 'tab' or 'space'");
    }
    return d[0];
}

struct DataFlags {
    std::string path;
    std::string label;
    std::string delimiter = ",";
    bool no_header = false;

    void add_to(CLI::App* app, bool required = true) {
        auto* opt = app->add_option("--data,-d", path, "dataset CSV");
        if (required) {
            opt->required();
        }
        app->add_option("--label", label, "label column name or 0-based index (default: last column)");
        app->add_option("--delimiter", delimiter, "field separator, 'tab' or 'space' (default ',')");
        app->add_flag("--no-header", no_header, "the file has no header row");
    }

    [[nodiscard]] DatasetSpec spec() const {
        DatasetSpec s;
        s.path = path;
        s.has_header = !no_header;
        s.delimiter = parse_delimiter(delimiter);
        if (!label.empty()) {
            long index = 0;
            const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), index);
            if (ec == std::errc() && ptr == label.data() + label.size()) {
                s.label_column = index;
            } else {
                s.label_column = label;
            }
        }
        return s;
    }
};

// Flags layered over an optional JSON config.
struct ConfigFlags {
    std::string config;
    std::string model;
    std::string kernel;
    double p = 1.0;
    double c = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c4 = 1.0;
    double epsilon = 0.1;
    double delta = 1e-4;
    double theta = 0.97;
    std::size_t min_points = 2;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    double holdout = 0.8;
    unsigned threads = 0;
    std::vector<double> grid_c_focal;
    std::vector<double> grid_c_rest;
    std::vector<double> grid_epsilon;
    std::vector<double> grid_p;
    std::vector<std::size_t> grid_min_points;
    std::vector<double> grid_purity;
    bool no_normalize = false;
    bool normalize_distance = false;
    std::string out;

    std::map<std::string, CLI::Option*> given;

    void add_to(CLI::App* app, bool with_grid, bool with_eval) {
        auto add = [&](const std::string& key, const std::string& flag, auto& into, const std::string& help) {
            given[key] = app->add_option(flag, into, help);
        };
        add("config", "--config", config, "JSON run configuration");
        add("model", "--model,-m", model, "gb-twksvc, twin-ksvc or ovr-tsvm");
        add("kernel", "--kernel", kernel, "linear or gaussian");
        add("p", "--p", p, "Gaussian kernel width");
        add("seed", "--seed", seed, "random seed (overrides GBTWIN_SEED)");
        add("threads", "--threads", threads, "worker threads, 0 for all cores");
        add("out", "--out,-o", out, "output file (default: standard output)");
        app->add_flag("--no-normalize", no_normalize, "skip min-max scaling");
        app->add_flag("--normalize-distance", normalize_distance,
                      "divide plane values by the weight norm when both planes vote");
        add("delta", "--delta", delta, "ridge added to H'H, relative to its mean diagonal");
        if (!with_grid) {
            add("c", "--c", c, "sets c1..c4");
            add("c1", "--c1", c1, "penalty of plane 1 against class q");
            add("c2", "--c2", c2, "penalty of plane 1 against the rest");
            add("c3", "--c3", c3, "penalty of plane 2 against class p");
            add("c4", "--c4", c4, "penalty of plane 2 against the rest");
            add("epsilon", "--epsilon", epsilon, "rest-class tube parameter in (0, 1)");
            add("theta", "--theta,--purity", theta, "granular-ball purity threshold");
            add("min_points", "--min-points,--num", min_points, "minimum points per granular ball");
        } else {
            given["grid_c_focal"] = app->add_option("--grid-c-focal", grid_c_focal, "c1 = c3 values")->delimiter(',');
            given["grid_c_rest"] = app->add_option("--grid-c-rest", grid_c_rest, "c2 = c4 values")->delimiter(',');
            given["grid_epsilon"] = app->add_option("--grid-epsilon", grid_epsilon, "epsilon values")->delimiter(',');
            given["grid_p"] = app->add_option("--grid-p", grid_p, "Gaussian width values")->delimiter(',');
            given["grid_min_points"] =
                app->add_option("--grid-min-points,--grid-num", grid_min_points, "min_points values")->delimiter(',');
            given["grid_purity"] = app->add_option("--grid-purity", grid_purity, "purity values")->delimiter(',');
        }
        if (with_eval) {
            add("folds", "--folds,-k", folds, "cross-validation folds");
            add("holdout", "--holdout", holdout, "train fraction of a stratified holdout split instead of CV");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const {
        const auto it = given.find(key);
        return it != given.end() && it->second->count() > 0;
    }

    template <class T>
    void apply(const std::string& key, const T& value, T& into) const {
        if (has(key)) {
            into = value;
        }
    }

    [[nodiscard]] RunConfig build() const {
        try {
            RunConfig cfg = config.empty() ? RunConfig{} : parse_run_config(read_file(config));
            if (has("model")) {
                cfg.model = parse_model_kind(model);
            }
            if (has("kernel")) {
                cfg.hp.kernel.kind = parse_kernel_kind(kernel);
            }
            apply("p", p, cfg.hp.kernel.p);
            if (has("c")) {
                cfg.hp.c1 = cfg.hp.c2 = cfg.hp.c3 = cfg.hp.c4 = c;
            }
            apply("c1", c1, cfg.hp.c1);
            apply("c2", c2, cfg.hp.c2);
            apply("c3", c3, cfg.hp.c3);
            apply("c4", c4, cfg.hp.c4);
            apply("epsilon", epsilon, cfg.hp.epsilon);
            apply("delta", delta, cfg.hp.delta);
            apply("theta", theta, cfg.granulation.theta);
            apply("min_points", min_points, cfg.granulation.min_points);
            apply("folds", folds, cfg.folds);
            if (has("holdout")) {
                cfg.holdout = holdout;
            }
            apply("grid_c_focal", grid_c_focal, cfg.grid.c_focal);
            apply("grid_c_rest", grid_c_rest, cfg.grid.c_rest);
            apply("grid_epsilon", grid_epsilon, cfg.grid.epsilon);
            apply("grid_p", grid_p, cfg.grid.kernel_p);
            apply("grid_min_points", grid_min_points, cfg.grid.min_points);
            apply("grid_purity", grid_purity, cfg.grid.purity);
            if (no_normalize) {
                cfg.normalize = false;
            }
            if (normalize_distance) {
                cfg.normalize_distance = true;
            }
            apply("out", out, cfg.output);
            cfg.validate();
            return cfg;
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }

    [[nodiscard]] std::uint64_t resolved_seed(const RunConfig& cfg) const {
        try {
            return resolve_seed(has("seed") ? std::optional<std::uint64_t>(seed) : std::nullopt, cfg.seed.value_or(0));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }

    [[nodiscard]] TrainOptions options(const RunConfig& cfg) const {
        TrainOptions o = cfg.train_options(resolved_seed(cfg));
        o.threads = threads;
        return o;
    }
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

std::string model_label_name(const TrainedModel& model, Label l) {
    const auto i = static_cast<std::size_t>(l);
    return i < model.label_names.size() ? model.label_names[i] : std::to_string(l);
}

json hp_json(const HyperParams& hp) {
    return {{"c1", hp.c1},           {"c2", hp.c2},
            {"c3", hp.c3},           {"c4", hp.c4},
            {"epsilon", hp.epsilon}, {"delta", hp.delta},
            {"kernel", {{"kind", to_string(hp.kernel.kind)}, {"p", hp.kernel.p}}}};
}

json granulation_json(const GranulationSettings& g) {
    return {{"theta", g.theta}, {"min_points", g.min_points}, {"seed", g.seed}};
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

// ---- commands -------------------------------------------------------------

int cmd_gen_balls(const DataFlags& df, const ConfigFlags& cf, bool raw, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = cf.build();
    const std::uint64_t seed = cf.resolved_seed(cfg);
    LabeledDataset data = load_csv(df.spec());
    if (!raw) {
        data.features = MinMaxScaler::fit(data.features).apply(data.features);
    }
    const BallSet balls = generate_balls(data, cfg.granulation.theta, cfg.granulation.min_points, seed);

    std::ostringstream csv;
    csv << std::setprecision(12) << "label,radius,member_count";
    for (std::size_t j = 0; j < data.dims(); ++j) {
        csv << ",c" << j + 1;
    }
    csv << '\n';
    for (const GranularBall& b : balls.balls) {
        csv << data.label_name(b.label) << ',' << b.radius << ',' << b.member_count;
        for (Eigen::Index j = 0; j < b.centroid.size(); ++j) {
            csv << ',' << b.centroid[j];
        }
        csv << '\n';
    }
    emit(out, cfg.output, csv.str());
    err << balls.balls.size() << " balls from " << data.size() << " points (" << balls.discarded_points
        << " discarded)\n";
    return exit_ok;
}

int cmd_train(const DataFlags& df, const ConfigFlags& cf, std::ostream& out) {
    const RunConfig cfg = cf.build();
    if (cfg.output.empty()) {
        throw UsageError("train needs --out (or \"output\" in the config) for the model file");
    }
    const LabeledDataset data = load_csv(df.spec());
    const TrainedModel model = train(data, cf.options(cfg));
    save_model(model, cfg.output);
    const std::vector<Label> predicted = predict(model, data.features);
    const std::size_t pairs = model.kind == ModelKind::ovr_tsvm ? model.one_vs_rest.size() : model.pairs.size();
    out << "model: " << to_string(model.kind) << ", classes: " << model.classes.size() << ", plane pairs: " << pairs
        << '\n'
        << "training accuracy: " << fixed(accuracy(predicted, data.labels), 2) << "%\n";
    return exit_ok;
}

int cmd_predict(const DataFlags& df, const std::string& model_path, bool unlabeled, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    const TrainedModel model = load_model(model_path);
    const DatasetSpec spec = df.spec();
    std::optional<LabeledDataset> data;
    Matrix x;
    if (unlabeled) {
        x = parse_numeric_csv(read_file(spec.path), spec.has_header, spec.delimiter).values;
    } else {
        data = load_csv(spec);
        x = data->features;
    }
    const std::vector<Label> predicted = predict(model, x);

    std::ostringstream csv;
    csv << (data ? "row,predicted,actual\n" : "row,predicted\n");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const std::string name = model_label_name(model, predicted[i]);
        csv << i + 1 << ',' << name;
        if (data) {
            const std::string actual = data->label_name(data->labels[i]);
            csv << ',' << actual;
            hits += name == actual ? 1 : 0;
        }
        csv << '\n';
    }
    emit(out, out_path, csv.str());
    if (data) {
        const double acc = 100.0 * static_cast<double>(hits) / static_cast<double>(predicted.size());
        (out_path.empty() ? err : out) << "accuracy: " << fixed(acc, 2) << "%\n";
    }
    return exit_ok;
}

int cmd_cv(const DataFlags& df, const ConfigFlags& cf, bool no_timing, std::ostream& out) {
    const RunConfig cfg = cf.build();
    const LabeledDataset data = load_csv(df.spec());
    const TrainOptions options = cf.options(cfg);
    const std::uint64_t seed = options.granulation.seed;
    const Trainer trainer = model_trainer(options);
    EvalReport report = cfg.holdout ? holdout(data, *cfg.holdout, trainer, seed)
                                    : kfold_cv(data, cfg.folds, trainer, seed);
    report.model = to_string(cfg.model);
    report.hyperparams = cfg.hp;
    if (cfg.model == ModelKind::gb_twksvc) {
        report.granulation = options.granulation;
    }
    emit(out, cfg.output, report_to_json(report, !no_timing));
    return exit_ok;
}

struct GridRun {
    GridResult result;
    EvalReport report;  ///< of the chosen cell: CV, or the holdout test when requested
};

GridRun run_grid(const LabeledDataset& data, const RunConfig& cfg, const TrainOptions& base) {
    const std::uint64_t seed = base.granulation.seed;
    GridRun run;
    if (!cfg.holdout) {
        run.result = grid_search(data, cfg.grid, base, cfg.folds, seed);
        run.report = run.result.best_cell().report;
        return run;
    }
    const Split split = stratified_split(data, *cfg.holdout, seed);
    run.result = grid_search(data.subset(split.train), cfg.grid, base, cfg.folds, seed);
    const GridCell& best = run.result.best_cell();
    TrainOptions chosen = base;
    chosen.hp = best.hp;
    chosen.granulation = best.granulation;
    run.report = holdout(data, *cfg.holdout, model_trainer(chosen), seed);
    run.report.model = best.report.model;
    run.report.hyperparams = best.report.hyperparams;
    run.report.granulation = best.report.granulation;
    return run;
}

int cmd_grid(const DataFlags& df, const ConfigFlags& cf, bool no_timing, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = cf.build();
    const LabeledDataset data = load_csv(df.spec());
    const TrainOptions base = cf.options(cfg);
    const GridRun run = run_grid(data, cfg, base);
    const GridCell& best = run.result.best_cell();
    const bool granular = cfg.model == ModelKind::gb_twksvc;

    json j;
    j["model"] = to_string(cfg.model);
    j["best"] = {{"index", run.result.best},
                 {"hyperparams", hp_json(best.hp)},
                 {"granulation", granular ? granulation_json(best.granulation) : json(nullptr)}};
    j["holdout"] = cfg.holdout ? json(*cfg.holdout) : json(nullptr);
    j["report"] = json::parse(report_to_json(run.report, !no_timing));
    j["cells"] = json::array();
    std::size_t failures = 0;
    for (const GridCell& cell : run.result.cells) {
        json c = {{"c_focal", cell.hp.c1},
                  {"c_rest", cell.hp.c2},
                  {"epsilon", cell.hp.epsilon},
                  {"kernel_p", cell.hp.kernel.p},
                  {"mean_accuracy", cell.report.mean_accuracy},
                  {"std_accuracy", cell.report.std_accuracy},
                  {"error", cell.error ? json(*cell.error) : json(nullptr)}};
        if (granular) {
            c["min_points"] = cell.granulation.min_points;
            c["purity"] = cell.granulation.theta;
        }
        failures += cell.error ? 1 : 0;
        j["cells"].push_back(std::move(c));
    }
    emit(out, cfg.output, j.dump(2) + "\n");
    if (failures > 0) {
        err << failures << " of " << run.result.cells.size() << " configurations failed and scored 0\n";
    }
    return exit_ok;
}

int cmd_bench(const ConfigFlags& cf, const std::string& data_dir, const std::vector<std::string>& datasets,
              const std::vector<std::string>& models, std::ostream& out, std::ostream& err) {
    RunConfig cfg = cf.build();
    std::vector<std::filesystem::path> files;
    if (datasets.empty()) {
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(data_dir, ec)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                files.push_back(entry.path());
            }
        }
        if (ec) {
            throw InvalidArgument("cannot list '" + data_dir + "'");
        }
        std::sort(files.begin(), files.end());
    } else {
        for (const std::string& name : datasets) {
            std::filesystem::path path = name;
            if (!path.has_extension()) {
                path = std::filesystem::path(data_dir) / (name + ".csv");
            }
            files.push_back(path);
        }
    }
    if (files.empty()) {
        throw InvalidArgument("no datasets found in '" + data_dir + "'");
    }
    std::vector<ModelKind> kinds;
    try {
        for (const std::string& m : models) {
            kinds.push_back(parse_model_kind(m));
        }
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (kinds.empty()) {
        kinds = {ModelKind::gb_twksvc, ModelKind::twin_ksvc, ModelKind::ovr_tsvm};
    }

    std::ostringstream csv;
    csv << "dataset,model,mean_accuracy,std_accuracy,mean_time_s\n";
    for (const auto& file : files) {
        DatasetSpec spec;
        spec.path = file;
        const LabeledDataset data = load_csv(spec);
        for (ModelKind kind : kinds) {
            cfg.model = kind;
            const GridRun run = run_grid(data, cfg, cf.options(cfg));
            const EvalReport& r = run.report;
            csv << file.stem().string() << ',' << to_string(kind) << ',' << fixed(r.mean_accuracy, 4) << ','
                << fixed(r.std_accuracy, 4) << ',' << std::setprecision(6) << r.train_time_seconds << '\n';
            err << file.stem().string() << ' ' << to_string(kind) << ": " << fixed(r.mean_accuracy, 2) << " +- "
                << fixed(r.std_accuracy, 2) << '\n';
        }
    }
    emit(out, cfg.output, csv.str());
    return exit_ok;
}

int cmd_stats(const std::string& input, bool no_header, const std::string& delimiter, bool as_json,
              const std::string& out_path, std::ostream& out) {
    const NumericTable table = parse_numeric_csv(read_file(input), !no_header, parse_delimiter(delimiter));
    const auto k = static_cast<std::size_t>(table.values.cols());
    if (k < 2) {
        throw InvalidArgument("stats needs at least two columns");
    }
    std::vector<std::vector<double>> cols(k);
    for (std::size_t j = 0; j < k; ++j) {
        const Vector v = table.values.col(static_cast<Eigen::Index>(j));
        cols[j].assign(v.data(), v.data() + v.size());
    }

    json j;
    std::ostringstream text;
    text << "column,mean,std,min,max\n";
    for (std::size_t c = 0; c < k; ++c) {
        const Descriptive d = describe(cols[c]);
        j["descriptive"].push_back(
            {{"column", table.columns[c]}, {"mean", d.mean}, {"std", d.std_dev}, {"min", d.min}, {"max", d.max}});
        text << table.columns[c] << ',' << fixed(d.mean, 2) << ',' << fixed(d.std_dev, 2) << ',' << fixed(d.min, 2)
             << ',' << fixed(d.max, 2) << '\n';
    }
    text << "\ncomparison,t,p_t,W,p_W\n";
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const TestResult t = paired_t_test(cols[a], cols[b]);
            const TestResult w = wilcoxon_signed_rank(cols[a], cols[b]);
            j["comparisons"].push_back({{"a", table.columns[a]},
                                        {"b", table.columns[b]},
                                        {"t", t.statistic},
                                        {"t_p", t.p_value},
                                        {"w", w.statistic},
                                        {"w_p", w.p_value},
                                        {"w_n", w.n}});
            text << table.columns[a] << " vs " << table.columns[b] << ',' << fixed(t.statistic, 3) << ','
                 << fixed(t.p_value, 4) << ',' << fixed(w.statistic, 2) << ',' << fixed(w.p_value, 4) << '\n';
        }
    }
    emit(out, out_path, as_json ? j.dump(2) + "\n" : text.str());
    return exit_ok;
}

int cmd_sensitivity(const DataFlags& df, const ConfigFlags& cf, std::ostream& out) {
    RunConfig cfg = cf.build();
    cfg.model = ModelKind::gb_twksvc;
    cfg.holdout.reset();
    const LabeledDataset data = load_csv(df.spec());
    const GridResult result = grid_search(data, cfg.grid, cf.options(cfg), cfg.folds, cf.resolved_seed(cfg));

    // Best inner configuration per (min_points, purity), in grid order.
    std::vector<const GridCell*> best;
    for (const GridCell& cell : result.cells) {
        auto it = std::find_if(best.begin(), best.end(), [&](const GridCell* b) {
            return b->granulation.min_points == cell.granulation.min_points &&
                   b->granulation.theta == cell.granulation.theta;
        });
        if (it == best.end()) {
            best.push_back(&cell);
        } else if (cell.report.mean_accuracy > (*it)->report.mean_accuracy) {
            *it = &cell;
        }
    }
    std::ostringstream csv;
    csv << "min_points,purity,mean_accuracy,std_accuracy\n";
    for (const GridCell* cell : best) {
        csv << cell->granulation.min_points << ',' << cell->granulation.theta << ','
            << fixed(cell->report.mean_accuracy, 4) << ',' << fixed(cell->report.std_accuracy, 4) << '\n';
    }
    emit(out, cfg.output, csv.str());
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Granular-ball twin K-class support vector classification"};
    app.name("gbtwin");
    app.require_subcommand(1);

    DataFlags data_flags;
    ConfigFlags gen_flags;
    ConfigFlags train_flags;
    ConfigFlags cv_flags;
    ConfigFlags grid_flags;
    ConfigFlags bench_flags;
    ConfigFlags sens_flags;

    auto* gen = app.add_subcommand("gen-balls", "granulate a dataset and write the balls as CSV");
    bool raw = false;
    data_flags.add_to(gen);
    gen_flags.add_to(gen, false, false);
    gen->add_flag("--raw", raw, "granulate unscaled features");

    auto* train_cmd = app.add_subcommand("train", "train a model and save it as JSON");
    data_flags.add_to(train_cmd);
    train_flags.add_to(train_cmd, false, false);

    auto* predict_cmd = app.add_subcommand("predict", "predict labels with a saved model");
    std::string model_path;
    std::string predict_out;
    bool unlabeled = false;
    data_flags.add_to(predict_cmd);
    predict_cmd->add_option("--model", model_path, "model JSON")->required();
    predict_cmd->add_option("--out,-o", predict_out, "label CSV (default: standard output)");
    predict_cmd->add_flag("--unlabeled", unlabeled, "every column is a feature");

    auto* cv_cmd = app.add_subcommand("cv", "cross-validate one configuration");
    bool no_timing = false;
    data_flags.add_to(cv_cmd);
    cv_flags.add_to(cv_cmd, false, true);
    cv_cmd->add_flag("--no-timing", no_timing, "omit timing from the report");

    auto* grid_cmd = app.add_subcommand("grid", "exhaustive grid search by cross-validated accuracy");
    data_flags.add_to(grid_cmd);
    grid_flags.add_to(grid_cmd, true, true);
    grid_cmd->add_flag("--no-timing", no_timing, "omit timing from the report");

    auto* bench_cmd = app.add_subcommand("bench", "grid-search every dataset with every model; CSV summary");
    std::string data_dir = "data";
    std::vector<std::string> datasets;
    std::vector<std::string> models;
    bench_cmd->add_option("--data-dir", data_dir, "directory of dataset CSVs (label in the last column)");
    bench_cmd->add_option("--datasets", datasets, "dataset names or paths (default: every CSV)")->delimiter(',');
    bench_cmd->add_option("--models", models, "models to run (default: all)")->delimiter(',');
    bench_flags.add_to(bench_cmd, true, true);

    auto* stats_cmd = app.add_subcommand("stats", "paired t-test and Wilcoxon test between accuracy columns");
    std::string stats_input;
    std::string stats_out;
    std::string stats_delimiter = ",";
    bool stats_no_header = false;
    bool stats_json = false;
    stats_cmd->add_option("--input,-i", stats_input, "CSV with one numeric column per model")->required();
    stats_cmd->add_option("--delimiter", stats_delimiter, "field separator");
    stats_cmd->add_flag("--no-header", stats_no_header, "the file has no header row");
    stats_cmd->add_flag("--json", stats_json, "JSON output with full precision");
    stats_cmd->add_option("--out,-o", stats_out, "output file (default: standard output)");

    auto* sens_cmd = app.add_subcommand("sensitivity", "accuracy over the min_points x purity grid as CSV");
    data_flags.add_to(sens_cmd);
    sens_flags.add_to(sens_cmd, true, true);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_balls(data_flags, gen_flags, raw, out, err);
        }
        if (train_cmd->parsed()) {
            return cmd_train(data_flags, train_flags, out);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(data_flags, model_path, unlabeled, predict_out, out, err);
        }
        if (cv_cmd->parsed()) {
            return cmd_cv(data_flags, cv_flags, no_timing, out);
        }
        if (grid_cmd->parsed()) {
            return cmd_grid(data_flags, grid_flags, no_timing, out, err);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench_flags, data_dir, datasets, models, out, err);
        }
        if (stats_cmd->parsed()) {
            return cmd_stats(stats_input, stats_no_header, stats_delimiter, stats_json, stats_out, out);
        }
        if (sens_cmd->parsed()) {
            return cmd_sensitivity(data_flags, sens_flags, out);
        }
    } catch (const UsageError& e) {
        err << "gbtwin: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "gbtwin: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

}  // namespace gbtwin::cli
