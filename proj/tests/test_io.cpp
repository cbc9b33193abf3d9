#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "sift/dataset.hpp"
#include "sift/errors.hpp"
#include "sift/io.hpp"
#include "sift/learning.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sift-io-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("dataset round-trip preserves every field bit-exactly") {
    TempDir tmp;
    auto data = sift::gen_synthetic_gaussian(25, 6, 77);
    data.points[3].group = 2;
    data.points[8].group = 0;
    const std::string path = tmp.file("data.jsonl");
    sift::write_dataset(path, data);
    const auto back = sift::read_dataset(path);
    REQUIRE(back.size() == data.size());
    CHECK(back.num_classes == data.num_classes);
    for (int i = 0; i < data.size(); ++i) {
        CHECK(back[i].id == data[i].id);
        CHECK(back[i].features == data[i].features);  // exact doubles
        CHECK(back[i].label == data[i].label);
        CHECK(back[i].group == data[i].group);
    }
    // Rewriting produces identical bytes (deterministic serialization).
    const std::string first = slurp(path);
    sift::write_dataset(path, back);
    CHECK(slurp(path) == first);
}

TEST_CASE("read_dataset infers num_classes from labels") {
    TempDir tmp;
    sift::Dataset d;
    d.num_classes = 4;
    d.points.push_back({0, {1.0}, 0, std::nullopt});
    d.points.push_back({1, {2.0}, 3, std::nullopt});
    const std::string path = tmp.file("multi.jsonl");
    sift::write_dataset(path, d);
    CHECK(sift::read_dataset(path).num_classes == 4);

    sift::Dataset binary;
    binary.points.push_back({0, {1.0}, 0, std::nullopt});
    binary.points.push_back({1, {2.0}, 0, std::nullopt});
    sift::write_dataset(path, binary);
    CHECK(sift::read_dataset(path).num_classes == 2);  // floor at 2
}

TEST_CASE("corruption log round-trip, sigma null only for label flips") {
    TempDir tmp;
    sift::CorruptionLog log{"label_flip", 0.15, 0.0, {2, 5, 9}};
    const std::string path = tmp.file("log.json");
    sift::write_corruption_log(path, log);
    const auto back = sift::read_corruption_log(path);
    CHECK(back.kind == log.kind);
    CHECK(back.fraction == log.fraction);
    CHECK(back.sigma == 0.0);
    CHECK(back.indices == log.indices);
    CHECK(slurp(path).find("\"sigma\": null") != std::string::npos);

    sift::CorruptionLog noise{"feature_noise", 0.2, 1.5, {1}};
    sift::write_corruption_log(path, noise);
    CHECK(sift::read_corruption_log(path).sigma == 1.5);
    CHECK(slurp(path).find("null") == std::string::npos);
}

TEST_CASE("tabular utility round-trip with and without default rule") {
    TempDir tmp;
    sift::TabularUtility game(5);
    game.set_entry(sift::SubsetMask(5, {}), 0.0);
    game.set_entry(sift::SubsetMask(5, {1, 3}), 0.125);
    game.set_entry(sift::SubsetMask(5, {0, 1, 2, 3, 4}), -2.5);
    const std::string path = tmp.file("game.json");
    sift::write_tabular_utility(path, game);
    auto back = sift::read_tabular_utility(path);
    CHECK(back.universe_size() == 5);
    CHECK(back.entry_count() == 3);
    CHECK(back.eval(sift::SubsetMask(5, {1, 3})) == 0.125);
    CHECK(back.eval(sift::SubsetMask(5, {0, 1, 2, 3, 4})) == -2.5);
    CHECK(back.default_kind() == sift::TabularUtility::DefaultKind::none);
    CHECK(slurp(path).find("default") == std::string::npos);

    game.set_default(sift::TabularUtility::DefaultKind::affine_in_size, {1.0, 0.25});
    sift::write_tabular_utility(path, game);
    back = sift::read_tabular_utility(path);
    CHECK(back.default_kind() == sift::TabularUtility::DefaultKind::affine_in_size);
    CHECK(back.default_params() == std::vector<double>{1.0, 0.25});
    CHECK(back.eval(sift::SubsetMask(5, {0, 2, 4})) == 1.0 + 0.25 * 3);
}

TEST_CASE("scores and selection round-trips") {
    TempDir tmp;
    sift::ScoreVector sv;
    sv.method = "exact-shapley";
    sv.n = 3;
    sv.scores = {1.0 / 3.0, -0.25, 7.5};
    sv.meta["oracle_evals"] = 8;
    sv.meta["seed"] = 42;
    const std::string spath = tmp.file("scores.json");
    sift::write_scores(spath, sv);
    const auto sb = sift::read_scores(spath);
    CHECK(sb.method == sv.method);
    CHECK(sb.n == 3);
    CHECK(sb.scores == sv.scores);
    CHECK(sb.meta == sv.meta);

    sift::SelectionResult sel;
    sel.mask = sift::SubsetMask(6, {1, 4, 5});
    sel.order = {4, 1, 5};
    sel.trace = {0.5, 0.75, 0.8125};
    sel.value_calls = 37;
    const std::string lpath = tmp.file("sel.json");
    sift::write_selection(lpath, sel);
    const auto lb = sift::read_selection(lpath);
    CHECK(lb.mask == sel.mask);
    CHECK(lb.order == sel.order);
    CHECK(lb.trace == sel.trace);
    CHECK(lb.value_calls == 37);
}

TEST_CASE("scores reader validates shape") {
    TempDir tmp;
    const std::string path = tmp.file("bad.json");
    sift::write_text_atomic(path, R"({"method":"m","n":3,"scores":[1.0,2.0],"meta":{}})");
    CHECK_THROWS_AS(sift::read_scores(path), sift::IoError);
    CHECK_THROWS_AS(sift::read_scores(tmp.file("missing.json")), sift::IoError);
    sift::write_text_atomic(path, "{not json");
    CHECK_THROWS_AS(sift::read_scores(path), sift::IoError);
}

TEST_CASE("sample store appends, reads back, drops a truncated tail") {
    TempDir tmp;
    const std::string path = tmp.file("samples.jsonl");
    CHECK(sift::maybe_read_samples(path, 4).empty());
    sift::append_sample(path, {sift::SubsetMask(4, {0, 2}), 1.5});
    sift::append_sample(path, {sift::SubsetMask(4, {}), 0.0});
    auto got = sift::maybe_read_samples(path, 4);
    REQUIRE(got.size() == 2);
    CHECK(got[0].mask.members() == std::vector<int>{0, 2});
    CHECK(got[0].utility == 1.5);
    CHECK(got[1].mask.empty());

    // Simulate a crash mid-write: append a complete line plus a torn one.
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        out << R"({"mask":[1],"utility":2.25})" << "\n";
        out << R"({"mask":[1,2],"uti)";  // no newline, malformed
    }
    got = sift::maybe_read_samples(path, 4);
    REQUIRE(got.size() == 3);
    CHECK(got[2].mask.members() == std::vector<int>{1});
    CHECK(got[2].utility == 2.25);
    // A malformed line that is not the final one is a hard error.
    sift::write_text_atomic(path, "{broken\n" + std::string(R"({"mask":[1],"utility":2.25})") + "\n");
    CHECK_THROWS_AS(sift::maybe_read_samples(path, 4), sift::IoError);
}

TEST_CASE("regressor checkpoint round-trips bit-exactly and validates its tag") {
    TempDir tmp;
    sift::SetRegressor model(4, 3, 8, 123);
    model.target_mean = 0.375;
    model.target_std = 2.25;
    const std::string path = tmp.file("model.json");
    sift::write_regressor(path, model);
    const auto back = sift::read_regressor(path);
    CHECK(back.feature_dim == 4);
    CHECK(back.num_classes == 3);
    CHECK(back.width == 8);
    CHECK(back.target_mean == model.target_mean);
    CHECK(back.target_std == model.target_std);
    CHECK(back.params == model.params);

    auto j = sift::read_json_file(path);
    j["format"] = "something-else";
    sift::write_json_file(path, j);
    CHECK_THROWS_AS(sift::read_regressor(path), sift::IoError);
    j["format"] = "sift-setregressor-v1";
    j["params"] = std::vector<double>{1.0, 2.0};
    sift::write_json_file(path, j);
    CHECK_THROWS_AS(sift::read_regressor(path), sift::IoError);
}

TEST_CASE("atomic writes leave no temp file and replace content whole") {
    TempDir tmp;
    const std::string path = tmp.file("atom.txt");
    sift::write_text_atomic(path, "first version\n");
    sift::write_text_atomic(path, "second version\n");
    CHECK(slurp(path) == "second version\n");
    CHECK(!std::filesystem::exists(path + ".tmp"));
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(tmp.path)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
}

TEST_CASE("json helpers round-trip with trailing newline") {
    TempDir tmp;
    const std::string path = tmp.file("obj.json");
    nlohmann::json j = {{"b", 2}, {"a", 1}};
    sift::write_json_file(path, j);
    const std::string text = slurp(path);
    CHECK(text.back() == '\n');
    CHECK(text.find("\"a\"") < text.find("\"b\""));  // keys serialized in order
    CHECK(sift::read_json_file(path) == j);
}
