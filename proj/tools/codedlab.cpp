// codedlab CLI: parse an experiment config, run it, write CSV/JSON-lines.
// Links the public C API only.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "codedlab/codedlab.h"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string out;
    std::string format;
    std::string seed;
};

int exit_code_of(codedlab_status status) {
    switch (status) {
        case CODEDLAB_OK: return 0;
        case CODEDLAB_ERR_CONFIG: return 2;
        case CODEDLAB_ERR_UNRECOVERABLE: return 3;
        case CODEDLAB_ERR_IO: return 4;
        default: return 1;
    }
}

int run_command(const std::string& command, const CommandArgs& args) {
    codedlab_config* config = nullptr;
    codedlab_status status = codedlab_config_parse_file(args.config_path.c_str(), &config);
    if (status != CODEDLAB_OK) {
        std::fprintf(stderr, "codedlab: %s\n", codedlab_last_error());
        return exit_code_of(status);
    }

    const char* config_command = nullptr;
    codedlab_config_command(config, &config_command);
    if (command != config_command) {
        std::fprintf(stderr, "codedlab: config declares [%s] but the '%s' subcommand was used\n",
                     config_command, command.c_str());
        codedlab_config_free(config);
        return 2;
    }

    if (!args.seed.empty()) {
        status = codedlab_config_set(config, "seed", args.seed.c_str());
        if (status != CODEDLAB_OK) {
            std::fprintf(stderr, "codedlab: %s\n", codedlab_last_error());
            codedlab_config_free(config);
            return exit_code_of(status);
        }
    }

    status = codedlab_run_to_file(config, args.out.empty() ? nullptr : args.out.c_str(),
                                  args.format.empty() ? nullptr : args.format.c_str());
    if (status != CODEDLAB_OK)
        std::fprintf(stderr, "codedlab: %s\n", codedlab_last_error());
    codedlab_config_free(config);
    return exit_code_of(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded computing and randomized sketching experiment runner"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(codedlab_version()));

    const char* commands[] = {"gc", "cmm", "sketch", "descend", "report"};
    const char* descriptions[] = {
        "gradient-coding error sweeps over straggler sets",
        "coded matrix-multiplication decode sweeps",
        "sketching error meters over a q grid",
        "distributed gradient descent simulation",
        "concentration-bound validation report",
    };

    CommandArgs args;
    for (size_t i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
        sub->add_option("--config", args.config_path, "experiment config file")
            ->required();
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--out", args.out, "output path (default: config 'out' or stdout)");
        sub->add_option("--format", args.format, "csv or jsonl")
            ->check(CLI::IsMember({"csv", "jsonl"}));
    }

    CLI11_PARSE(app, argc, argv);
    return run_command(app.get_subcommands().front()->get_name(), args);
}
