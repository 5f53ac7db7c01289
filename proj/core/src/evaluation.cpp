#include "gbtwin/evaluation.hpp"

#include "gbtwin/statistics.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <random>

namespace gbtwin {

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
    if (predicted.size() != truth.size()) {
        throw DimensionMismatch("prediction and truth lengths differ");
    }
    if (truth.empty()) {
        throw EmptyInput("accuracy of zero predictions");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        hits += predicted[i] == truth[i] ? 1 : 0;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

double macro_ovr_auc(const Matrix& scores, std::span<const Label> truth, std::span<const Label> classes) {
    if (classes.size() < 2) {
        throw InvalidArgument("AUC needs at least two classes");
    }
    if (scores.rows() != static_cast<Eigen::Index>(truth.size()) ||
        scores.cols() != static_cast<Eigen::Index>(classes.size())) {
        throw DimensionMismatch("score matrix shape does not match truth and class list");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        std::vector<double> pos;
        std::vector<double> neg;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const double s = scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            (truth[i] == classes[k] ? pos : neg).push_back(s);
        }
        if (pos.empty() || neg.empty()) {
            throw UndefinedAuc("class " + std::to_string(classes[k]) + " has no positive or no negative rows");
        }
        double wins = 0.0;
        for (double p : pos) {
            for (double n : neg) {
                wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
            }
        }
        total += wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
    }
    return 100.0 * total / static_cast<double>(classes.size());
}

namespace {

std::map<Label, std::vector<std::size_t>> rows_by_class(const LabeledDataset& data) {
    std::map<Label, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[data.labels[i]].push_back(i);
    }
    return out;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& sorted_subset) {
    std::vector<std::size_t> out;
    out.reserve(n - sorted_subset.size());
    std::size_t at = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (at < sorted_subset.size() && sorted_subset[at] == i) {
            ++at;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<double> fold_auc(const FoldOutput& out, const std::vector<Label>& truth) {
    if (out.scores.size() == 0) {
        return std::nullopt;
    }
    try {
        return macro_ovr_auc(out.scores, truth, out.score_classes);
    } catch (const UndefinedAuc&) {
        return std::nullopt;
    }
}

struct FoldAccumulator {
    std::vector<double> auc;
    bool auc_defined = true;
    double time = 0.0;

    void add(EvalReport& report, const FoldOutput& out, const std::vector<Label>& truth, double seconds) {
        report.fold_accuracy.push_back(accuracy(out.labels, truth));
        const auto a = fold_auc(out, truth);
        if (a) {
            auc.push_back(*a);
        } else {
            auc_defined = false;
        }
        time += seconds;
    }

    void finish(EvalReport& report) const {
        summarize(report);
        report.folds = report.fold_accuracy.size();
        report.train_time_seconds = report.folds > 0 ? time / static_cast<double>(report.folds) : 0.0;
        if (auc_defined && !auc.empty()) {
            report.macro_auc = mean(auc);
        }
    }
};

}  // namespace

Split stratified_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train fraction must lie strictly between 0 and 1");
    }
    data.validate(1);
    std::mt19937_64 rng(seed);
    Split split;
    for (auto& [label, idx] : rows_by_class(data)) {
        if (idx.size() < 2) {
            throw ClassTooSmall("class " + data.label_name(label) + " has fewer than 2 rows");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n = static_cast<long>(idx.size());
        const long n_train = std::clamp(std::lround(train_fraction * static_cast<double>(n)), 1L, n - 1);
        split.train.insert(split.train.end(), idx.begin(), idx.begin() + n_train);
        split.test.insert(split.test.end(), idx.begin() + n_train, idx.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::vector<std::size_t>> stratified_folds(const LabeledDataset& data, std::size_t k,
                                                       std::uint64_t seed) {
    if (k < 2) {
        throw InvalidArgument("cross-validation needs at least 2 folds");
    }
    data.validate(1);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t offset = 0;
    for (auto& [label, idx] : rows_by_class(data)) {
        if (idx.size() < k) {
            throw ClassTooSmall("class " + data.label_name(label) + " has " + std::to_string(idx.size()) +
                                " rows, fewer than " + std::to_string(k) + " folds");
        }
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            folds[(offset + j) % k].push_back(idx[j]);
        }
        offset = (offset + idx.size()) % k;
    }
    for (auto& f : folds) {
        std::sort(f.begin(), f.end());
    }
    return folds;
}

void summarize(EvalReport& report) {
    if (report.fold_accuracy.empty()) {
        report.mean_accuracy = 0.0;
        report.std_accuracy = 0.0;
        return;
    }
    report.mean_accuracy = mean(report.fold_accuracy);
    report.std_accuracy = population_std(report.fold_accuracy);
}

EvalReport kfold_cv(const LabeledDataset& data, std::size_t k, const Trainer& trainer, std::uint64_t seed) {
    const auto folds = stratified_folds(data, k, seed);
    EvalReport report;
    report.seed = seed;
    FoldAccumulator acc;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const LabeledDataset train = data.subset(complement(data.size(), folds[f]));
        const LabeledDataset test = data.subset(folds[f]);
        const auto t0 = std::chrono::steady_clock::now();
        const Predictor predictor = trainer(train, f);
        const double elapsed = seconds_since(t0);
        acc.add(report, predictor(test.features), test.labels, elapsed);
    }
    acc.finish(report);
    return report;
}

EvalReport holdout(const LabeledDataset& data, double train_fraction, const Trainer& trainer, std::uint64_t seed) {
    const Split split = stratified_split(data, train_fraction, seed);
    const LabeledDataset train = data.subset(split.train);
    const LabeledDataset test = data.subset(split.test);
    EvalReport report;
    report.seed = seed;
    FoldAccumulator acc;
    const auto t0 = std::chrono::steady_clock::now();
    const Predictor predictor = trainer(train, 0);
    const double elapsed = seconds_since(t0);
    acc.add(report, predictor(test.features), test.labels, elapsed);
    acc.finish(report);
    return report;
}

namespace {

Predictor predictor_for(std::shared_ptr<const TrainedModel> model) {
    return [model](const Matrix& x) {
        FoldOutput out;
        out.scores = decision_scores(*model, x);
        out.labels = labels_from_scores(*model, out.scores);
        out.score_classes = model->classes;
        return out;
    };
}

}  // namespace

Trainer model_trainer(const TrainOptions& options) {
    return [options](const LabeledDataset& train, std::size_t) {
        return predictor_for(std::make_shared<const TrainedModel>(gbtwin::train(train, options)));
    };
}

namespace {

nlohmann::json hp_json(const HyperParams& hp) {
    return {{"c1", hp.c1},
            {"c2", hp.c2},
            {"c3", hp.c3},
            {"c4", hp.c4},
            {"epsilon", hp.epsilon},
            {"delta", hp.delta},
            {"relative_delta", hp.relative_delta},
            {"kernel", to_string(hp.kernel.kind)},
            {"kernel_p", hp.kernel.p}};
}

}  // namespace

std::string report_to_json(const EvalReport& report, bool with_timing) {
    nlohmann::json j;
    j["model"] = report.model;
    j["folds"] = report.folds;
    j["seed"] = report.seed;
    j["fold_accuracy"] = report.fold_accuracy;
    j["mean_accuracy"] = report.mean_accuracy;
    j["std_accuracy"] = report.std_accuracy;
    j["macro_auc"] = report.macro_auc ? nlohmann::json(*report.macro_auc) : nlohmann::json(nullptr);
    if (with_timing) {
        j["train_time_seconds"] = report.train_time_seconds;
    }
    j["hyperparams"] = report.hyperparams ? hp_json(*report.hyperparams) : nlohmann::json(nullptr);
    if (report.granulation) {
        j["granulation"] = {{"theta", report.granulation->theta},
                            {"min_points", report.granulation->min_points},
                            {"seed", report.granulation->seed}};
    } else {
        j["granulation"] = nullptr;
    }
    return j.dump(2) + "\n";
}

void GridSpec::validate() const {
    if (c_focal.empty() || c_rest.empty() || epsilon.empty() || kernel_p.empty() || min_points.empty() ||
        purity.empty()) {
        throw InvalidArgument("every grid axis needs at least one value");
    }
}

namespace {

struct PreparedFold {
    LabeledDataset train;  ///< scaled
    Matrix test;           ///< raw
    std::vector<Label> truth;
    std::optional<MinMaxScaler> scaler;
};

struct FoldBalls {
    std::optional<BallSet> balls;
    std::string error;
    double seconds = 0.0;
};

}  // namespace

GridResult grid_search(const LabeledDataset& data, const GridSpec& grid, const TrainOptions& base,
                       std::size_t folds, std::uint64_t seed) {
    grid.validate();
    data.validate(2);
    const bool granular = base.kind == ModelKind::gb_twksvc;
    const bool gaussian = base.hp.kernel.kind == KernelKind::gaussian;

    const auto test_sets = stratified_folds(data, folds, seed);
    std::vector<PreparedFold> prepared;
    for (const auto& test_idx : test_sets) {
        PreparedFold pf;
        pf.train = data.subset(complement(data.size(), test_idx));
        const LabeledDataset test = data.subset(test_idx);
        pf.test = test.features;
        pf.truth = test.labels;
        if (base.normalize) {
            pf.scaler = MinMaxScaler::fit(pf.train.features);
            pf.train.features = pf.scaler->apply(pf.train.features);
        }
        prepared.push_back(std::move(pf));
    }

    std::vector<GranulationSettings> outer;
    if (granular) {
        for (std::size_t m : grid.min_points) {
            for (double theta : grid.purity) {
                GranulationSettings g = base.granulation;
                g.min_points = m;
                g.theta = theta;
                outer.push_back(g);
            }
        }
    } else {
        outer.push_back(base.granulation);
    }

    std::vector<HyperParams> inner;
    for (double cf : grid.c_focal) {
        for (double cr : grid.c_rest) {
            for (double eps : grid.epsilon) {
                const std::vector<double> widths = gaussian ? grid.kernel_p : std::vector<double>{base.hp.kernel.p};
                for (double p : widths) {
                    HyperParams hp = base.hp;
                    hp.c1 = hp.c3 = cf;
                    hp.c2 = hp.c4 = cr;
                    hp.epsilon = eps;
                    hp.kernel.p = p;
                    inner.push_back(hp);
                }
            }
        }
    }

    GridResult result;
    result.cells.resize(outer.size() * inner.size());
    const unsigned cell_threads = base.observer ? 1U : base.threads;

    for (std::size_t o = 0; o < outer.size(); ++o) {
        std::vector<FoldBalls> balls(prepared.size());
        if (granular) {
            for (std::size_t f = 0; f < prepared.size(); ++f) {
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    balls[f].balls = generate_balls(prepared[f].train, outer[o]);
                } catch (const Error& e) {
                    balls[f].error = e.what();
                }
                balls[f].seconds = seconds_since(t0);
            }
        }

        parallel_for(inner.size(), cell_threads, [&](std::size_t i) {
            GridCell& cell = result.cells[o * inner.size() + i];
            cell.hp = inner[i];
            cell.granulation = outer[o];
            cell.report.model = to_string(base.kind);
            cell.report.seed = seed;
            cell.report.hyperparams = inner[i];
            if (granular) {
                cell.report.granulation = outer[o];
            }
            TrainOptions opts = base;
            opts.hp = inner[i];
            opts.granulation = outer[o];
            opts.threads = 1;
            try {
                FoldAccumulator acc;
                for (std::size_t f = 0; f < prepared.size(); ++f) {
                    if (granular && !balls[f].balls) {
                        throw DegenerateGranulation(balls[f].error);
                    }
                    const auto t0 = std::chrono::steady_clock::now();
                    const TrainedModel model = train_prepared(prepared[f].train, prepared[f].scaler, opts,
                                                              granular ? &*balls[f].balls : nullptr);
                    const double elapsed = seconds_since(t0) + balls[f].seconds;
                    FoldOutput out;
                    out.scores = decision_scores(model, prepared[f].test);
                    out.labels = labels_from_scores(model, out.scores);
                    out.score_classes = model.classes;
                    acc.add(cell.report, out, prepared[f].truth, elapsed);
                }
                acc.finish(cell.report);
            } catch (const Error& e) {
                cell.error = e.what();
                cell.report.fold_accuracy.assign(prepared.size(), 0.0);
                cell.report.macro_auc.reset();
                summarize(cell.report);
                cell.report.folds = prepared.size();
            }
        });
    }

    for (std::size_t i = 1; i < result.cells.size(); ++i) {
        if (result.cells[i].report.mean_accuracy > result.cells[result.best].report.mean_accuracy) {
            result.best = i;
        }
    }
    return result;
}

}  // namespace gbtwin
