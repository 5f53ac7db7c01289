#include "gbtwin/model_io.hpp"

#include "gbtwin/dataio.hpp"

#include <json.hpp>

namespace gbtwin {

using nlohmann::json;

namespace {

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from(const json& j) {
    const auto values = j.get<std::vector<double>>();
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = values[i];
    }
    return v;
}

json matrix_json(const Matrix& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            flat.push_back(m(i, j));
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

Matrix matrix_from(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto flat = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != flat.size()) {
        throw InvalidArgument("matrix data length does not match its shape");
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(i, c) = flat[k++];
        }
    }
    return m;
}

json kernel_json(const KernelSpec& k) { return {{"kind", to_string(k.kind)}, {"p", k.p}}; }

KernelSpec kernel_from(const json& j) {
    KernelSpec k;
    k.kind = parse_kernel_kind(j.at("kind").get<std::string>());
    k.p = j.at("p").get<double>();
    return k;
}

json planes_json(const PlanePair& pp) {
    json j = {{"w1", vector_json(pp.w1)},
              {"b1", pp.b1},
              {"w2", vector_json(pp.w2)},
              {"b2", pp.b2},
              {"kernel", kernel_json(pp.kernel)}};
    j["reference"] = pp.reference ? matrix_json(*pp.reference) : json(nullptr);
    return j;
}

PlanePair planes_from(const json& j) {
    PlanePair pp;
    pp.w1 = vector_from(j.at("w1"));
    pp.b1 = j.at("b1").get<double>();
    pp.w2 = vector_from(j.at("w2"));
    pp.b2 = j.at("b2").get<double>();
    pp.kernel = kernel_from(j.at("kernel"));
    if (!j.at("reference").is_null()) {
        pp.reference = matrix_from(j.at("reference"));
    }
    return pp;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
    const HyperParams& hp = model.hyperparams;
    json doc;
    doc["format"] = model_format;
    doc["mode"] = to_string(model.kind);
    doc["classes"] = model.classes;
    doc["label_names"] = model.label_names;
    doc["dims"] = model.dims;
    doc["hyperparams"] = {{"c1", hp.c1},
                          {"c2", hp.c2},
                          {"c3", hp.c3},
                          {"c4", hp.c4},
                          {"epsilon", hp.epsilon},
                          {"delta", hp.delta},
                          {"relative_delta", hp.relative_delta},
                          {"kernel", kernel_json(hp.kernel)}};
    doc["normalize_distance"] = model.normalize_distance;
    if (model.normalization) {
        doc["normalization"] = {{"min", vector_json(model.normalization->lo)},
                                {"max", vector_json(model.normalization->hi)}};
    } else {
        doc["normalization"] = nullptr;
    }
    if (model.granulation) {
        doc["granulation"] = {{"theta", model.granulation->theta},
                              {"min_points", model.granulation->min_points},
                              {"seed", model.granulation->seed}};
    } else {
        doc["granulation"] = nullptr;
    }
    json pairs = json::array();
    for (const auto& [key, record] : model.pairs) {
        json entry = planes_json(record.planes);
        entry["p"] = key.first;
        entry["q"] = key.second;
        pairs.push_back(std::move(entry));
    }
    doc["pairs"] = std::move(pairs);
    json ovr = json::array();
    for (const auto& [label, record] : model.one_vs_rest) {
        json entry = planes_json(record.planes);
        entry["class"] = label;
        ovr.push_back(std::move(entry));
    }
    doc["one_vs_rest"] = std::move(ovr);
    return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format").get<std::string>() != model_format) {
            throw InvalidArgument("unsupported model format '" + doc.at("format").get<std::string>() + "'");
        }
        TrainedModel model;
        model.kind = parse_model_kind(doc.at("mode").get<std::string>());
        model.classes = doc.at("classes").get<std::vector<Label>>();
        model.label_names = doc.at("label_names").get<std::vector<std::string>>();
        model.dims = doc.at("dims").get<Eigen::Index>();
        const json& h = doc.at("hyperparams");
        HyperParams& hp = model.hyperparams;
        hp.c1 = h.at("c1").get<double>();
        hp.c2 = h.at("c2").get<double>();
        hp.c3 = h.at("c3").get<double>();
        hp.c4 = h.at("c4").get<double>();
        hp.epsilon = h.at("epsilon").get<double>();
        hp.delta = h.at("delta").get<double>();
        hp.relative_delta = h.at("relative_delta").get<bool>();
        hp.kernel = kernel_from(h.at("kernel"));
        hp.validate();
        model.normalize_distance = doc.at("normalize_distance").get<bool>();
        if (!doc.at("normalization").is_null()) {
            MinMaxScaler s;
            s.lo = vector_from(doc["normalization"].at("min"));
            s.hi = vector_from(doc["normalization"].at("max"));
            if (s.lo.size() != model.dims || s.hi.size() != model.dims) {
                throw InvalidArgument("normalization length does not match dims");
            }
            model.normalization = std::move(s);
        }
        if (!doc.at("granulation").is_null()) {
            GranulationSettings g;
            g.theta = doc["granulation"].at("theta").get<double>();
            g.min_points = doc["granulation"].at("min_points").get<std::size_t>();
            g.seed = doc["granulation"].at("seed").get<std::uint64_t>();
            model.granulation = g;
        }
        for (const json& entry : doc.at("pairs")) {
            model.pairs.emplace(std::make_pair(entry.at("p").get<Label>(), entry.at("q").get<Label>()),
                                PlaneRecord::from(planes_from(entry)));
        }
        for (const json& entry : doc.at("one_vs_rest")) {
            model.one_vs_rest.emplace(entry.at("class").get<Label>(), PlaneRecord::from(planes_from(entry)));
        }
        const std::size_t k = model.classes.size();
        const std::size_t expected = model.kind == ModelKind::ovr_tsvm ? 0 : k * (k - 1) / 2;
        if (k < 2 || model.pairs.size() != expected ||
            model.one_vs_rest.size() != (model.kind == ModelKind::ovr_tsvm ? k : 0)) {
            throw InvalidArgument("plane records do not match the class list");
        }
        return model;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    write_file_atomic(path, model_to_json(model));
}

TrainedModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace gbtwin
