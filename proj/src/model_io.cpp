#include "lcsvm/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace lcsvm {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "lcsvm-model";
constexpr int kVersion = 1;

const json& field(const json& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end())
        throw SchemaError("model file is missing field '" + path + key + "'");
    return *it;
}

json kernel_to_json(const KernelSpec& spec) {
    return std::visit(
        [](const auto& k) -> json {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, LinearKernel>) {
                return {{"type", "linear"}};
            } else if constexpr (std::is_same_v<K, RbfKernel>) {
                return {{"type", "rbf"}, {"gamma", k.gamma}};
            } else {
                return {{"type", "polynomial"},
                        {"degree", k.degree},
                        {"scale", k.scale},
                        {"coef0", k.coef0}};
            }
        },
        spec);
}

KernelSpec kernel_from_json(const json& j, const std::string& path) {
    const std::string type = field(j, "type", path).get<std::string>();
    if (type == "linear") return LinearKernel{};
    if (type == "rbf") return RbfKernel{field(j, "gamma", path).get<double>()};
    if (type == "polynomial")
        return PolynomialKernel{field(j, "degree", path).get<int>(),
                                field(j, "scale", path).get<double>(),
                                field(j, "coef0", path).get<double>()};
    throw SchemaError("unknown kernel type '" + type + "' at '" + path + "type'");
}

json multiclass_to_json(const MulticlassModel& model) {
    json j;
    j["strategy"] = "one-vs-one";
    j["kernel"] = kernel_to_json(model.kernel);
    j["classes"] = json::array();
    for (const auto& label : model.classes) j["classes"].push_back(label.name);
    j["scaler"] = {{"means", model.scaler.means}, {"stds", model.scaler.stds}};
    j["pairs"] = json::array();
    for (const auto& pair : model.pairs) {
        json p;
        p["positive"] = pair.positive;
        p["negative"] = pair.negative;
        p["bias"] = pair.model.bias;
        p["coefficients"] = pair.model.coefficients;
        json vectors = json::array();
        for (std::size_t i = 0; i < pair.model.support_vectors.size(); ++i) {
            const auto row = pair.model.support_vectors.row(i);
            vectors.push_back(std::vector<double>(row.begin(), row.end()));
        }
        p["support_vectors"] = vectors;
        j["pairs"].push_back(p);
    }
    return j;
}

MulticlassModel multiclass_from_json(const json& j, const std::string& path) {
    MulticlassModel model;
    const std::string strategy = field(j, "strategy", path).get<std::string>();
    if (strategy != "one-vs-one")
        throw SchemaError("unsupported strategy '" + strategy + "' at '" + path +
                          "strategy'");
    model.kernel = kernel_from_json(field(j, "kernel", path), path + "kernel.");
    validate(model.kernel);

    const json& classes = field(j, "classes", path);
    for (std::size_t c = 0; c < classes.size(); ++c)
        model.classes.push_back(
            {static_cast<int>(c), classes.at(c).get<std::string>()});

    const json& scaler = field(j, "scaler", path);
    model.scaler.means =
        field(scaler, "means", path + "scaler.").get<std::vector<double>>();
    model.scaler.stds =
        field(scaler, "stds", path + "scaler.").get<std::vector<double>>();
    if (model.scaler.means.size() != model.scaler.stds.size())
        throw SchemaError("scaler means/stds lengths differ at '" + path +
                          "scaler'");

    const json& pairs = field(j, "pairs", path);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const std::string pair_path = path + "pairs[" + std::to_string(p) + "].";
        const json& entry = pairs.at(p);
        PairModel pair;
        pair.positive = field(entry, "positive", pair_path).get<int>();
        pair.negative = field(entry, "negative", pair_path).get<int>();
        pair.model.bias = field(entry, "bias", pair_path).get<double>();
        pair.model.coefficients =
            field(entry, "coefficients", pair_path).get<std::vector<double>>();
        pair.model.kernel = model.kernel;
        pair.model.support_vectors = FeatureMatrix(model.scaler.dim());
        const json& vectors = field(entry, "support_vectors", pair_path);
        for (const auto& vec : vectors) {
            const auto row = vec.get<std::vector<double>>();
            pair.model.support_vectors.push_row(row);
        }
        if (pair.model.coefficients.size() != pair.model.support_vectors.size())
            throw SchemaError("coefficient/support vector counts differ at '" +
                              pair_path + "'");
        model.pairs.push_back(std::move(pair));
    }
    model.validate();
    return model;
}

json document_for(const MulticlassModel& model) {
    json j = multiclass_to_json(model);
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["type"] = "multiclass";
    return j;
}

json document_for(const EnsembleModel& model) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["type"] = "ensemble";
    j["tie_break"] = "first-listed-member";
    if (model.weights.empty())
        j["weights"] = nullptr;
    else
        j["weights"] = model.weights;
    j["members"] = json::array();
    for (const auto& member : model.members) {
        json m;
        m["name"] = member.name;
        m["model"] = multiclass_to_json(member.model);
        j["members"].push_back(m);
    }
    return j;
}

void write_document(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing model file " + path.string());
}

json read_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("model file " + path.string() +
                          " is not valid JSON: " + e.what());
    }
    const std::string format = field(j, "format", "").get<std::string>();
    if (format != kFormat)
        throw SchemaError("unexpected format tag '" + format + "'");
    const int version = field(j, "version", "").get<int>();
    if (version != kVersion)
        throw SchemaError("unsupported model version " + std::to_string(version) +
                          " (expected " + std::to_string(kVersion) + ")");
    return j;
}

}  // namespace

void save_model(const MulticlassModel& model, const std::filesystem::path& path) {
    model.validate();
    write_document(document_for(model), path);
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
    model.validate();
    write_document(document_for(model), path);
}

LoadedModel load_model(const std::filesystem::path& path) {
    const json j = read_document(path);
    const std::string type = field(j, "type", "").get<std::string>();
    if (type == "multiclass") return multiclass_from_json(j, "");
    if (type == "ensemble") {
        EnsembleModel model;
        const json& weights = field(j, "weights", "");
        if (!weights.is_null())
            model.weights = weights.get<std::vector<double>>();
        const json& members = field(j, "members", "");
        for (std::size_t m = 0; m < members.size(); ++m) {
            const std::string member_path = "members[" + std::to_string(m) + "].";
            const json& entry = members.at(m);
            EnsembleMember member;
            member.name = field(entry, "name", member_path).get<std::string>();
            member.model = multiclass_from_json(
                field(entry, "model", member_path), member_path + "model.");
            model.members.push_back(std::move(member));
        }
        model.validate();
        return model;
    }
    throw SchemaError("unknown model type '" + type + "'");
}

MulticlassModel load_multiclass_model(const std::filesystem::path& path) {
    LoadedModel loaded = load_model(path);
    if (auto* model = std::get_if<MulticlassModel>(&loaded)) return std::move(*model);
    throw SchemaError("expected a multiclass model in " + path.string());
}

EnsembleModel load_ensemble_model(const std::filesystem::path& path) {
    LoadedModel loaded = load_model(path);
    if (auto* model = std::get_if<EnsembleModel>(&loaded)) return std::move(*model);
    throw SchemaError("expected an ensemble model in " + path.string());
}

}  // namespace lcsvm
