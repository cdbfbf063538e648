#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "instab/experiment.hpp"
#include "instab/io.hpp"
#include "instab/presets.hpp"

int main(int argc, char** argv) {
    CLI::App app{"instab: numerical laboratory for nonlinear stabilization experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::size_t jobs = 1;

    auto* run = app.add_subcommand("run", "run the experiments in a JSON config");
    run->add_option("config", config_path, "path to the run configuration");
    run->add_option("--preset", preset, "run a bundled preset instead of a file");
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--jobs", jobs, "number of concurrent experiments")
        ->check(CLI::PositiveNumber);

    auto* presets = app.add_subcommand("presets", "list bundled experiment presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            for (const auto& name : instab::preset_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        std::string text;
        if (!preset.empty() && !config_path.empty()) {
            std::fprintf(stderr, "error: give either a config path or --preset, not both\n");
            return 1;
        }
        if (!preset.empty()) {
            if (preset == "paper-suite")
                text = instab::paper_suite_config();
            else
                text = instab::preset_config(preset);
        } else if (!config_path.empty()) {
            text = instab::read_text_file(config_path);
        } else {
            std::fprintf(stderr, "error: run needs a config path or --preset\n");
            return 1;
        }
        const instab::RunConfig cfg = instab::parse_run_config(text);
        const int code = instab::run_all(cfg, out_dir, jobs);
        if (code == 0)
            std::printf("all experiments ok\n");
        else
            std::printf("some experiments failed their expectation\n");
        return code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
