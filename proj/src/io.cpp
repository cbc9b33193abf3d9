#include "sift/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sift/errors.hpp"

namespace sift {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& path) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("invalid JSON in " + path);
    return j;
}

json mask_to_json(const SubsetMask& mask) { return json(mask.members()); }

SubsetMask mask_from_json(const json& j, int n, const std::string& path) {
    if (!j.is_array()) throw IoError("mask is not an array in " + path);
    std::vector<int> members;
    members.reserve(j.size());
    for (const auto& e : j) members.push_back(e.get<int>());
    try {
        return SubsetMask(n, std::move(members));
    } catch (const Error& err) {
        throw IoError(std::string(err.what()) + " in " + path);
    }
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << text;
        out.flush();
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

void write_json_file(const std::string& path, const json& value) {
    write_text_atomic(path, value.dump(2) + "\n");
}

void write_dataset(const std::string& path, const Dataset& data) {
    std::ostringstream out;
    for (const auto& p : data.points) {
        json j{{"id", p.id}, {"features", p.features}, {"label", p.label}};
        j["group"] = p.group ? json(*p.group) : json(nullptr);
        out << j.dump() << '\n';
    }
    write_text_atomic(path, out.str());
}

Dataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    Dataset data;
    int max_label = 1;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = parse_json(line, path);
        DataPoint p;
        p.id = j.at("id").get<int>();
        p.features = j.at("features").get<std::vector<double>>();
        p.label = j.at("label").get<int>();
        if (j.contains("group") && !j.at("group").is_null()) p.group = j.at("group").get<int>();
        max_label = std::max(max_label, p.label);
        data.points.push_back(std::move(p));
    }
    data.num_classes = max_label + 1;
    try {
        data.validate();
    } catch (const Error& err) {
        throw IoError(std::string(err.what()) + " in " + path);
    }
    return data;
}

void write_corruption_log(const std::string& path, const CorruptionLog& log) {
    json j{{"kind", log.kind}, {"fraction", log.fraction}, {"indices", log.indices}};
    j["sigma"] = log.kind == "label_flip" ? json(nullptr) : json(log.sigma);
    write_json_file(path, j);
}

CorruptionLog read_corruption_log(const std::string& path) {
    const json j = read_json_file(path);
    CorruptionLog log;
    log.kind = j.at("kind").get<std::string>();
    log.fraction = j.at("fraction").get<double>();
    if (j.contains("sigma") && !j.at("sigma").is_null()) log.sigma = j.at("sigma").get<double>();
    log.indices = j.at("indices").get<std::vector<int>>();
    return log;
}

void write_tabular_utility(const std::string& path, const TabularUtility& game) {
    json entries = json::array();
    for (const auto& [mask, value] : game.sorted_entries())
        entries.push_back(json{{"mask", mask_to_json(mask)}, {"value", value}});
    json j{{"n", game.universe_size()}, {"entries", std::move(entries)}};
    if (game.default_kind() != TabularUtility::DefaultKind::none) {
        const char* kind =
            game.default_kind() == TabularUtility::DefaultKind::constant ? "constant" : "affine_in_size";
        j["default"] = json{{"kind", kind}, {"params", game.default_params()}};
    }
    write_json_file(path, j);
}

TabularUtility read_tabular_utility(const std::string& path) {
    const json j = read_json_file(path);
    const int n = j.at("n").get<int>();
    TabularUtility game(n);
    for (const auto& e : j.at("entries"))
        game.set_entry(mask_from_json(e.at("mask"), n, path), e.at("value").get<double>());
    if (j.contains("default")) {
        const auto& d = j.at("default");
        const auto kind = d.at("kind").get<std::string>();
        auto params = d.at("params").get<std::vector<double>>();
        if (kind == "constant") {
            game.set_default(TabularUtility::DefaultKind::constant, std::move(params));
        } else if (kind == "affine_in_size") {
            game.set_default(TabularUtility::DefaultKind::affine_in_size, std::move(params));
        } else {
            throw IoError("unknown default kind '" + kind + "' in " + path);
        }
    }
    return game;
}

void write_scores(const std::string& path, const ScoreVector& scores) {
    write_json_file(path, json{{"method", scores.method},
                               {"n", scores.n},
                               {"scores", scores.scores},
                               {"meta", scores.meta}});
}

ScoreVector read_scores(const std::string& path) {
    const json j = read_json_file(path);
    ScoreVector s;
    s.method = j.at("method").get<std::string>();
    s.n = j.at("n").get<int>();
    s.scores = j.at("scores").get<std::vector<double>>();
    if (j.contains("meta")) s.meta = j.at("meta");
    if (static_cast<int>(s.scores.size()) != s.n) throw IoError("score length mismatch in " + path);
    return s;
}

void write_selection(const std::string& path, const SelectionResult& result) {
    write_json_file(path, json{{"n", result.mask.universe_size()},
                               {"mask", mask_to_json(result.mask)},
                               {"order", result.order},
                               {"trace", result.trace},
                               {"value_calls", result.value_calls}});
}

SelectionResult read_selection(const std::string& path) {
    const json j = read_json_file(path);
    SelectionResult r;
    const int n = j.at("n").get<int>();
    r.mask = mask_from_json(j.at("mask"), n, path);
    r.order = j.at("order").get<std::vector<int>>();
    r.trace = j.at("trace").get<std::vector<double>>();
    if (j.contains("value_calls")) r.value_calls = j.at("value_calls").get<std::int64_t>();
    return r;
}

void append_sample(const std::string& path, const UtilitySample& sample) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open " + path + " for appending");
    out << json{{"mask", mask_to_json(sample.mask)}, {"utility", sample.utility}}.dump() << '\n';
    out.flush();
    if (!out) throw IoError("append failed for " + path);
}

std::vector<UtilitySample> maybe_read_samples(const std::string& path, int n) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::vector<UtilitySample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            if (in.eof()) break;  // interrupted final write
            throw IoError("invalid JSON line in " + path);
        }
        UtilitySample s;
        s.mask = mask_from_json(j.at("mask"), n, path);
        s.utility = j.at("utility").get<double>();
        out.push_back(std::move(s));
    }
    return out;
}

void write_regressor(const std::string& path, const SetRegressor& model) {
    const int e = model.embed_dim();
    const int w = model.width;
    write_json_file(path, json{{"format", "sift-setregressor-v1"},
                               {"feature_dim", model.feature_dim},
                               {"num_classes", model.num_classes},
                               {"width", model.width},
                               {"shapes", json::array({json::array({w, e}), json::array({w, w}),
                                                       json::array({w, w}), json::array({w, w}),
                                                       json::array({w, w}), json::array({1, w})})},
                               {"target_mean", model.target_mean},
                               {"target_std", model.target_std},
                               {"params", model.params}});
}

SetRegressor read_regressor(const std::string& path) {
    const json j = read_json_file(path);
    if (j.value("format", "") != "sift-setregressor-v1")
        throw IoError("unsupported checkpoint format in " + path);
    SetRegressor model;
    model.feature_dim = j.at("feature_dim").get<int>();
    model.num_classes = j.at("num_classes").get<int>();
    model.width = j.at("width").get<int>();
    model.target_mean = j.at("target_mean").get<double>();
    model.target_std = j.at("target_std").get<double>();
    model.params = j.at("params").get<std::vector<double>>();
    if (model.params.size() != model.param_count())
        throw IoError("checkpoint parameter count mismatch in " + path);
    return model;
}

}  // namespace sift
