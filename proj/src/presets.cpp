#include "instab/presets.hpp"

#include <json.hpp>

#include "instab/errors.hpp"

namespace instab {

namespace {

using nlohmann::json;

json preset_body(const std::string& name) {
    if (name == "prop-2Dprop")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "jordan2d"}};
    if (name == "prop-nil")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "shift_mult"}};
    if (name == "prop-Gallprop")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "translate_mult"}};
    if (name == "prop-one")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "contract_support"}};
    if (name == "prop-tthree")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "charsolver"}};
    if (name == "prop-2dim")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "discont2d"}};
    if (name == "prop-nprop")
        return {{"name", name},
                {"kind", "sandwich"},
                {"weights", {{"sample_lo", 0.0}, {"sample_hi", 2.0}, {"count", 1000}}},
                {"alpha", {{"kind", "log"}, {"gamma", 2.0}}},
                {"deltas", {1e-4, 1e-6}}};
    if (name == "prop-exscal")
        return {{"name", name}, {"kind", "verify_bound"}, {"bound", "scalar_sharpness"}};
    if (name == "prop-prodprop")
        return {{"name", name},
                {"kind", "cone"},
                {"alpha", {{"kind", "power"}, {"b", 1.0}, {"p", 0.5}}},
                {"rho", 2.0},
                {"C", 1.0},
                {"seeds", 500},
                {"hineq_samples", 10000}};
    throw ConfigError("unknown preset '" + name + "'");
}

} // namespace

std::vector<std::string> preset_names() {
    return {"prop-2Dprop", "prop-nil",   "prop-Gallprop", "prop-one",      "prop-tthree",
            "prop-2dim",   "prop-nprop", "prop-exscal",   "prop-prodprop"};
}

std::string preset_config(const std::string& name) {
    json cfg;
    cfg["experiments"] = json::array({preset_body(name)});
    return cfg.dump(2) + "\n";
}

std::string paper_suite_config() {
    json cfg;
    cfg["experiments"] = json::array();
    for (const auto& name : preset_names()) cfg["experiments"].push_back(preset_body(name));
    cfg["experiments"].push_back(
        {{"name", "dichotomy"}, {"kind", "verify_bound"}, {"bound", "dichotomy"}});
    // negative fixtures: expected failures keep the exit code at 0
    cfg["experiments"].push_back(
        {{"name", "neg-sandwich-gamma1"},
         {"kind", "sandwich"},
         {"expect", "fail"},
         {"weights", {{"sample_lo", 0.0}, {"sample_hi", 2.0}, {"count", 1000}}},
         {"alpha", {{"kind", "log"}, {"gamma", 1.0}}},
         {"deltas", {1e-12}},
         {"eta_override", 0.0031173245422307628}});
    cfg["experiments"].push_back(
        {{"name", "neg-translate-mult-rate-cert"},
         {"kind", "certify_instability"},
         {"expect", "fail"},
         {"map",
          {{"tag", "translate_mult"},
           {"chi", {{"a", 1.0}, {"b", 2.0}}},
           {"h", {{"kind", "log"}, {"C", 2.0}}}}},
         {"eps", 0.25},
         {"C", 1.0},
         {"rho", 1.5},
         {"deltas", {1e-3, 1e-4}},
         {"max_steps", 2000}});
    return cfg.dump(2) + "\n";
}

} // namespace instab
