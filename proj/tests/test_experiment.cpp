#include <doctest.h>

#include <filesystem>

#include "instab/experiment.hpp"
#include "instab/io.hpp"
#include "instab/presets.hpp"

using namespace instab;

namespace {

std::string temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("instab_test_" + tag);
    std::filesystem::remove_all(dir);
    return dir.string();
}

} // namespace

TEST_CASE("config parsing rejects malformed input with line-precise messages") {
    try {
        parse_run_config("{\n  \"experiments\": [\n  broken\n]}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
    }

    CHECK_THROWS_WITH_AS(parse_run_config(R"({"experiments": [], "bogus": 1})"),
                         doctest::Contains("unknown key 'bogus'"), ConfigError);

    CHECK_THROWS_WITH_AS(
        parse_run_config(
            R"({"experiments": [{"name":"a","kind":"simulate","map":{"tag":"jordan2d"},"wat":1}]})"),
        doctest::Contains("unknown key 'wat'"), ConfigError);

    CHECK_THROWS_WITH_AS(
        parse_run_config(
            R"({"experiments": [{"name":"a","kind":"nope"}]})"),
        doctest::Contains("unknown experiment kind"), ConfigError);

    CHECK_THROWS_WITH_AS(
        parse_run_config(
            R"({"experiments": [{"name":"a","kind":"simulate","map":{"tag":"jordan2d"}},
                                {"name":"a","kind":"simulate","map":{"tag":"jordan2d"}}]})"),
        doctest::Contains("duplicate experiment name"), ConfigError);
}

TEST_CASE("map and alpha JSON construction") {
    CHECK(map_tag(map_from_json(nlohmann::json::parse(R"({"tag":"jordan2d"})"), "m")) ==
          std::string("jordan2d"));
    CHECK(map_tag(map_from_json(
              nlohmann::json::parse(
                  R"({"tag":"translate_mult_dilate","chi":{"a":0.5,"b":1.5},"h":{"kind":"power","q":2.0}})"),
              "m")) == std::string("translate_mult_dilate"));
    const MapSpec scal = map_from_json(
        nlohmann::json::parse(
            R"({"tag":"scalar_alpha","rho":2.0,"alpha":{"kind":"log","gamma":2.0}})"),
        "m");
    CHECK(map_tag(scal) == std::string("scalar_alpha"));
    CHECK_THROWS_AS(map_from_json(nlohmann::json::parse(R"({"tag":"wat"})"), "m"), ConfigError);
    CHECK_THROWS_AS(
        map_from_json(nlohmann::json::parse(R"({"tag":"jordan2d","extra":1})"), "m"),
        ConfigError);
}

TEST_CASE("empty experiment list exits cleanly with an empty summary") {
    const RunConfig cfg = parse_run_config(R"({"experiments": []})");
    const std::string out = temp_dir("empty");
    CHECK(run_all(cfg, out, 1) == 0);
    const auto summary = nlohmann::json::parse(read_text_file(out + "/summary.json"));
    CHECK(summary.at("all_ok").get<bool>());
    CHECK(summary.at("experiments").empty());
}

TEST_CASE("expectation semantics drive the exit code") {
    // alpha_hat of the scalar map equals sqrt(r); expecting the wrong profile fails
    const std::string failing = R"({"experiments": [{
        "name": "mismatch", "kind": "remainder_profile",
        "map": {"tag":"scalar_alpha","rho":2.0,"alpha":{"kind":"power","b":1.0,"p":0.5}},
        "radii": [1e-2, 1e-3],
        "expect_alpha": {"kind":"power","b":1.0,"p":1.0}}]})";

    const RunConfig cfg = parse_run_config(failing);
    CHECK(run_all(cfg, temp_dir("fail"), 1) == 2);

    nlohmann::json flipped = nlohmann::json::parse(failing);
    flipped["experiments"][0]["expect"] = "fail";
    const RunConfig cfg2 = parse_run_config(flipped.dump());
    CHECK(run_all(cfg2, temp_dir("negfix"), 1) == 0);

    // a correct expectation passes outright
    nlohmann::json good = nlohmann::json::parse(failing);
    good["experiments"][0]["expect_alpha"] = {{"kind", "power"}, {"b", 1.0}, {"p", 0.5}};
    CHECK(run_all(parse_run_config(good.dump()), temp_dir("good"), 1) == 0);
}

TEST_CASE("runs are byte-reproducible") {
    const std::string cfg_text = R"({"experiments": [
        {"name": "sim", "kind": "simulate",
         "map": {"tag":"scalar_alpha","rho":2.0,"alpha":{"kind":"log","gamma":2.0}},
         "seed": "plus", "delta": 1e-6, "steps": 40},
        {"name": "prof", "kind": "remainder_profile",
         "map": {"tag":"translate_mult","chi":{"a":1.0,"b":2.0},"h":{"kind":"log","C":2.0}},
         "radii": [1e-2, 1e-3]}
    ]})";
    const RunConfig cfg = parse_run_config(cfg_text);
    const std::string out1 = temp_dir("repro1"), out2 = temp_dir("repro2");
    CHECK(run_all(cfg, out1, 2) == 0);
    CHECK(run_all(cfg, out2, 1) == 0);
    for (const char* name : {"sim", "prof"}) {
        const std::string a = read_text_file(out1 + "/" + name + "/data.csv");
        const std::string b = read_text_file(out2 + "/" + name + "/data.csv");
        REQUIRE(a == b);
        REQUIRE(!a.empty());
    }
    CHECK(read_text_file(out1 + "/summary.json") == read_text_file(out2 + "/summary.json"));
}

TEST_CASE("bundled presets are valid standalone configs") {
    const auto names = preset_names();
    CHECK(names.size() == 9);
    for (const auto& name : names) {
        const RunConfig cfg = parse_run_config(preset_config(name));
        REQUIRE(cfg.experiments.size() == 1);
        CHECK(cfg.experiments[0].name == name);
    }
    CHECK_THROWS_AS(preset_config("prop-unknown"), ConfigError);
    // the paper suite aggregates every preset plus the dichotomy
    const RunConfig suite = parse_run_config(paper_suite_config());
    CHECK(suite.experiments.size() == names.size() + 3);
}

TEST_CASE("certify and stability experiment kinds") {
    // linear scalar map: witnesses exist at the exact rate
    const std::string cert = R"({"experiments": [{
        "name": "lin", "kind": "certify_instability",
        "map": {"tag":"scalar_alpha","rho":1.5,"alpha":{"kind":"power","b":0.0,"p":1.0}},
        "eps": 0.125, "C": 1.0, "rho": 1.5, "deltas": [1e-3, 1e-5]}]})";
    CHECK(run_all(parse_run_config(cert), temp_dir("cert"), 1) == 0);

    // eps_auto_budget derives the threshold from the map's own alpha
    const std::string autob = R"({"experiments": [{
        "name": "auto", "kind": "certify_instability",
        "map": {"tag":"scalar_alpha","rho":2.0,"alpha":{"kind":"log","gamma":2.0}},
        "eps_auto_budget": true, "C": 0.5, "rho": 2.0, "deltas": [1e-4, 1e-6]}]})";
    CHECK(run_all(parse_run_config(autob), temp_dir("auto"), 1) == 0);
}
