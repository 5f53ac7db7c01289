#include "run_config.hpp"

#include <json.hpp>

#include <set>

namespace gbtwin::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> known) {
    if (!j.is_object()) {
        throw InvalidArgument(std::string(where) + " must be a JSON object");
    }
    const std::set<std::string_view> allowed(known);
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& into) {
    if (j.contains(key)) {
        into = j.at(key).get<T>();
    }
}

}  // namespace

GridSpec reduced_grid() {
    GridSpec g;
    g.c_focal = {0.25, 1.0, 4.0};
    g.c_rest = {0.25, 1.0, 4.0};
    g.epsilon = {0.1, 0.5};
    g.kernel_p = {1.0};
    g.min_points = {2, 3};
    g.purity = {0.97, 0.99};
    return g;
}

void RunConfig::validate() const {
    hp.validate();
    granulation.validate();
    grid.validate();
    if (folds < 2) {
        throw InvalidArgument("folds must be at least 2");
    }
    if (holdout && !(*holdout > 0.0 && *holdout < 1.0)) {
        throw InvalidArgument("holdout train fraction must lie in (0, 1)");
    }
}

TrainOptions RunConfig::train_options(std::uint64_t run_seed) const {
    TrainOptions o;
    o.kind = model;
    o.hp = hp;
    o.granulation = granulation;
    o.granulation.seed = run_seed;
    o.normalize = normalize;
    o.normalize_distance = normalize_distance;
    return o;
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    try {
        const json j = json::parse(text);
        reject_unknown(j, "config", {"model", "kernel", "hyperparams", "granulation", "grid", "folds", "seed",
                                     "holdout", "normalize", "normalize_distance", "output"});
        if (j.contains("model")) {
            cfg.model = parse_model_kind(j.at("model").get<std::string>());
        }
        if (j.contains("kernel")) {
            const json& k = j.at("kernel");
            reject_unknown(k, "kernel", {"kind", "p"});
            if (k.contains("kind")) {
                cfg.hp.kernel.kind = parse_kernel_kind(k.at("kind").get<std::string>());
            }
            read(k, "p", cfg.hp.kernel.p);
        }
        if (j.contains("hyperparams")) {
            const json& h = j.at("hyperparams");
            reject_unknown(h, "hyperparams", {"c1", "c2", "c3", "c4", "epsilon", "delta", "relative_delta"});
            read(h, "c1", cfg.hp.c1);
            read(h, "c2", cfg.hp.c2);
            read(h, "c3", cfg.hp.c3);
            read(h, "c4", cfg.hp.c4);
            read(h, "epsilon", cfg.hp.epsilon);
            read(h, "delta", cfg.hp.delta);
            read(h, "relative_delta", cfg.hp.relative_delta);
        }
        if (j.contains("granulation")) {
            const json& g = j.at("granulation");
            reject_unknown(g, "granulation", {"theta", "min_points"});
            read(g, "theta", cfg.granulation.theta);
            read(g, "min_points", cfg.granulation.min_points);
        }
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            reject_unknown(g, "grid", {"c_focal", "c_rest", "epsilon", "kernel_p", "min_points", "purity"});
            read(g, "c_focal", cfg.grid.c_focal);
            read(g, "c_rest", cfg.grid.c_rest);
            read(g, "epsilon", cfg.grid.epsilon);
            read(g, "kernel_p", cfg.grid.kernel_p);
            read(g, "min_points", cfg.grid.min_points);
            read(g, "purity", cfg.grid.purity);
        }
        read(j, "folds", cfg.folds);
        if (j.contains("seed")) {
            cfg.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("holdout") && !j.at("holdout").is_null()) {
            cfg.holdout = j.at("holdout").get<double>();
        }
        read(j, "normalize", cfg.normalize);
        read(j, "normalize_distance", cfg.normalize_distance);
        read(j, "output", cfg.output);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace gbtwin::cli
