#include "gbtwin/multiclass.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace gbtwin {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::gb_twksvc:
            return "gb-twksvc";
        case ModelKind::twin_ksvc:
            return "twin-ksvc";
        case ModelKind::ovr_tsvm:
            return "ovr-tsvm";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "gb-twksvc" || name == "gb") {
        return ModelKind::gb_twksvc;
    }
    if (name == "twin-ksvc" || name == "tksvc") {
        return ModelKind::twin_ksvc;
    }
    if (name == "ovr-tsvm" || name == "tsvm") {
        return ModelKind::ovr_tsvm;
    }
    throw InvalidArgument("unknown model kind '" + std::string(name) + "'");
}

PlaneRecord PlaneRecord::from(PlanePair planes) {
    PlaneRecord r;
    const auto [n1, n2] = planes.weight_norms();
    r.planes = std::move(planes);
    r.norm1 = n1;
    r.norm2 = n2;
    return r;
}

Matrix TrainedModel::prepare(const Matrix& x) const {
    if (x.cols() != dims) {
        throw DimensionMismatch("model expects " + std::to_string(dims) + " features, got " +
                                std::to_string(x.cols()));
    }
    return normalization ? normalization->apply(x) : x;
}

namespace {

struct ClassBlock {
    Matrix points;
    Vector radii;
};

Matrix stack_rows(const std::vector<const ClassBlock*>& blocks, Eigen::Index cols) {
    Eigen::Index rows = 0;
    for (const ClassBlock* b : blocks) {
        rows += b->points.rows();
    }
    Matrix out(rows, cols);
    Eigen::Index at = 0;
    for (const ClassBlock* b : blocks) {
        out.middleRows(at, b->points.rows()) = b->points;
        at += b->points.rows();
    }
    return out;
}

Vector stack_radii(const std::vector<const ClassBlock*>& blocks) {
    Eigen::Index rows = 0;
    for (const ClassBlock* b : blocks) {
        rows += b->radii.size();
    }
    Vector out(rows);
    Eigen::Index at = 0;
    for (const ClassBlock* b : blocks) {
        out.segment(at, b->radii.size()) = b->radii;
        at += b->radii.size();
    }
    return out;
}

std::map<Label, ClassBlock> blocks_from_balls(const BallSet& balls) {
    std::map<Label, ClassBlock> out;
    for (Label l : balls.labels()) {
        out[l] = ClassBlock{balls.centroids_of(l), balls.radii_of(l)};
    }
    return out;
}

std::map<Label, ClassBlock> blocks_from_points(const LabeledDataset& data) {
    std::map<Label, std::vector<std::size_t>> rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
        rows[data.labels[i]].push_back(i);
    }
    std::map<Label, ClassBlock> out;
    for (const auto& [l, idx] : rows) {
        ClassBlock b;
        b.points.resize(static_cast<Eigen::Index>(idx.size()), data.features.cols());
        for (std::size_t r = 0; r < idx.size(); ++r) {
            b.points.row(static_cast<Eigen::Index>(r)) = data.features.row(static_cast<Eigen::Index>(idx[r]));
        }
        b.radii = Vector::Zero(static_cast<Eigen::Index>(idx.size()));
        out[l] = std::move(b);
    }
    return out;
}

struct PairJob {
    Label p;
    Label q;
    PairProblem problem;
    HyperParams hp;
};

std::vector<PairTraining> run_jobs(const std::vector<PairJob>& jobs, PlaneMode mode, const TrainOptions& options) {
    std::vector<PairTraining> results(jobs.size());
    parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
        results[i] = train_pair_detailed(jobs[i].problem, jobs[i].hp, mode, options.solver);
    });
    if (options.observer) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            options.observer(jobs[i].p, jobs[i].q, results[i].diagnostics);
        }
    }
    return results;
}

}  // namespace

TrainedModel train_prepared(const LabeledDataset& data, std::optional<MinMaxScaler> scaler,
                            const TrainOptions& options, const BallSet* balls) {
    data.validate(2);
    options.hp.validate();

    TrainedModel model;
    model.kind = options.kind;
    model.label_names = data.label_names;
    model.dims = data.features.cols();
    model.normalization = std::move(scaler);
    model.hyperparams = options.hp;
    model.normalize_distance = options.normalize_distance;
    const PlaneMode mode = model.plane_mode();

    std::map<Label, ClassBlock> blocks;
    if (options.kind == ModelKind::gb_twksvc) {
        options.granulation.validate();
        model.granulation = options.granulation;
        if (balls != nullptr) {
            blocks = blocks_from_balls(*balls);
        } else {
            blocks = blocks_from_balls(generate_balls(data, options.granulation));
        }
        if (blocks.size() < 2) {
            throw DegenerateGranulation("granular balls cover fewer than two classes");
        }
    } else {
        blocks = blocks_from_points(data);
    }
    for (const auto& entry : blocks) {
        model.classes.push_back(entry.first);
    }
    if (model.classes.size() < 2) {
        throw TooFewClasses("training needs at least two classes");
    }

    const Eigen::Index d = model.dims;
    std::vector<PairJob> jobs;
    if (options.kind == ModelKind::ovr_tsvm) {
        HyperParams hp = options.hp;
        hp.c3 = options.hp.c2;
        for (Label k : model.classes) {
            std::vector<const ClassBlock*> rest;
            for (const auto& [l, b] : blocks) {
                if (l != k) {
                    rest.push_back(&b);
                }
            }
            const ClassBlock& own = blocks.at(k);
            PairProblem problem;
            problem.a = own.points;
            problem.r1 = own.radii;
            problem.b = stack_rows(rest, d);
            problem.r2 = stack_radii(rest);
            problem.c = Matrix(0, d);
            problem.r3 = Vector(0);
            jobs.push_back({k, k, std::move(problem), hp});
        }
    } else {
        for (std::size_t i = 0; i < model.classes.size(); ++i) {
            for (std::size_t j = i + 1; j < model.classes.size(); ++j) {
                const Label p = model.classes[i];
                const Label q = model.classes[j];
                std::vector<const ClassBlock*> rest;
                for (const auto& [l, b] : blocks) {
                    if (l != p && l != q) {
                        rest.push_back(&b);
                    }
                }
                PairProblem problem;
                problem.a = blocks.at(p).points;
                problem.r1 = blocks.at(p).radii;
                problem.b = blocks.at(q).points;
                problem.r2 = blocks.at(q).radii;
                problem.c = stack_rows(rest, d);
                problem.r3 = stack_radii(rest);
                jobs.push_back({p, q, std::move(problem), options.hp});
            }
        }
    }

    std::vector<PairTraining> results = run_jobs(jobs, mode, options);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        PlaneRecord record = PlaneRecord::from(std::move(results[i].planes));
        if (options.kind == ModelKind::ovr_tsvm) {
            model.one_vs_rest.emplace(jobs[i].p, std::move(record));
        } else {
            model.pairs.emplace(std::make_pair(jobs[i].p, jobs[i].q), std::move(record));
        }
    }
    return model;
}

TrainedModel train(const LabeledDataset& data, const TrainOptions& options) {
    data.validate(2);
    if (!options.normalize) {
        return train_prepared(data, std::nullopt, options);
    }
    MinMaxScaler scaler = MinMaxScaler::fit(data.features);
    LabeledDataset scaled = data;
    scaled.features = scaler.apply(data.features);
    return train_prepared(scaled, std::move(scaler), options);
}

Vote vote_from_values(double f1, double f2, double epsilon, double norm1, double norm2, bool normalize_distance) {
    const double margin = 1.0 - epsilon;
    const bool for_p = f1 > -margin;
    const bool for_q = f2 < margin;
    if (for_p && !for_q) {
        return Vote::p;
    }
    if (for_q && !for_p) {
        return Vote::q;
    }
    if (!for_p && !for_q) {
        return Vote::none;
    }
    double d1 = std::abs(f1);
    double d2 = std::abs(f2);
    if (normalize_distance) {
        d1 /= norm1 > 0.0 ? norm1 : 1.0;
        d2 /= norm2 > 0.0 ? norm2 : 1.0;
    }
    return d2 < d1 ? Vote::q : Vote::p;
}

Vote vote_pair(const PlaneRecord& record, const Eigen::Ref<const Vector>& z, double epsilon,
               bool normalize_distance) {
    const auto [f1, f2] = record.planes.evaluate(z);
    return vote_from_values(f1, f2, epsilon, record.norm1, record.norm2, normalize_distance);
}

namespace {

std::map<Label, Eigen::Index> column_index(const TrainedModel& model) {
    std::map<Label, Eigen::Index> out;
    for (std::size_t i = 0; i < model.classes.size(); ++i) {
        out[model.classes[i]] = static_cast<Eigen::Index>(i);
    }
    return out;
}

Matrix pairwise_votes(const TrainedModel& model, const Matrix& z) {
    const auto column = column_index(model);
    Matrix votes = Matrix::Zero(z.rows(), static_cast<Eigen::Index>(model.classes.size()));
    for (const auto& [key, record] : model.pairs) {
        const auto [f1, f2] = record.planes.evaluate_batch(z);
        const Eigen::Index cp = column.at(key.first);
        const Eigen::Index cq = column.at(key.second);
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            switch (vote_from_values(f1[i], f2[i], model.hyperparams.epsilon, record.norm1, record.norm2,
                                     model.normalize_distance)) {
                case Vote::p:
                    votes(i, cp) += 1.0;
                    break;
                case Vote::q:
                    votes(i, cq) += 1.0;
                    break;
                case Vote::none:
                    break;
            }
        }
    }
    return votes;
}

Matrix ovr_scores(const TrainedModel& model, const Matrix& z) {
    const auto column = column_index(model);
    Matrix scores(z.rows(), static_cast<Eigen::Index>(model.classes.size()));
    for (const auto& [label, record] : model.one_vs_rest) {
        const Vector f = record.planes.evaluate_batch(z).first;
        const double norm = record.norm1 > 0.0 ? record.norm1 : 1.0;
        scores.col(column.at(label)) = -f.cwiseAbs() / norm;
    }
    return scores;
}

}  // namespace

Matrix vote_scores(const TrainedModel& model, const Matrix& x) {
    if (model.kind == ModelKind::ovr_tsvm) {
        throw InvalidArgument("one-vs-rest models do not cast pairwise votes");
    }
    return pairwise_votes(model, model.prepare(x));
}

Matrix decision_scores(const TrainedModel& model, const Matrix& x) {
    const Matrix z = model.prepare(x);
    return model.kind == ModelKind::ovr_tsvm ? ovr_scores(model, z) : pairwise_votes(model, z);
}

std::vector<Label> labels_from_scores(const TrainedModel& model, const Matrix& scores) {
    if (scores.cols() != static_cast<Eigen::Index>(model.classes.size())) {
        throw DimensionMismatch("score matrix has " + std::to_string(scores.cols()) + " columns for " +
                                std::to_string(model.classes.size()) + " classes");
    }
    std::vector<Label> out(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index k = 1; k < scores.cols(); ++k) {
            if (scores(i, k) > scores(i, best)) {
                best = k;
            }
        }
        out[static_cast<std::size_t>(i)] = model.classes[static_cast<std::size_t>(best)];
    }
    return out;
}

std::vector<Label> predict(const TrainedModel& model, const Matrix& x) {
    return labels_from_scores(model, decision_scores(model, x));
}

}  // namespace gbtwin
