#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "conegreen/cli.hpp"

using namespace conegreen;

int main(int argc, char **argv) {
    CLI::App app{"cone-green: Mellin symbol calculus and Green's formulas for "
                 "Fuchs-type operators on the half-line"};
    app.require_subcommand(1);

    JobConfig cfg;
    std::string input_path, out_path, delta_text;
    std::vector<std::string> params;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--operator", cfg.operator_text, "operator expression, e.g. \"d^3 + t^-1*d^2\"");
        cmd->add_option("--input", input_path, "JSON operator file");
        cmd->add_option("--param", params, "parameter binding name=value (repeatable)");
        cmd->add_option("--out", out_path, "write the JSON artifact to this file");
    };

    auto *symbols = app.add_subcommand("symbols", "conormal symbols of the operator");
    add_common(symbols);

    auto *invert = app.add_subcommand("invert", "inverse of the complete Mellin symbol");
    add_common(invert);
    invert->add_option("--terms", cfg.terms, "number of inverse terms (default 2*mu)");

    auto *basis = app.add_subcommand("basis", "characteristic basis of the asymptotic type");
    add_common(basis);
    basis->add_option("--delta", delta_text, "reference weight")->required();
    basis->add_option("--depth", cfg.depth, "strip depth (default mu)");

    auto *green = app.add_subcommand("green", "Green's formula report");
    add_common(green);
    green->add_option("--delta", delta_text, "reference weight")->required();

    auto *verify = app.add_subcommand("verify", "run invariant suites");
    add_common(verify);
    verify->add_option("--delta", delta_text, "reference weight");
    verify->add_option("--suite", cfg.suite, "local | global | green | all");
    verify->add_option("--depth", cfg.depth, "strip depth (default mu)");

    CLI11_PARSE(app, argc, argv);

    for (const auto &p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) {
            std::cerr << "bad --param (expected name=value): " << p << "\n";
            return int(ExitCode::parse);
        }
        auto value = parse_gaussian_rational(p.substr(eq + 1));
        if (!value) {
            std::cerr << "bad --param value: " << p << "\n";
            return int(ExitCode::parse);
        }
        cfg.bindings[p.substr(0, eq)] = *value;
    }
    if (!delta_text.empty()) {
        auto d = parse_gaussian_rational(delta_text);
        if (!d || d->im != 0) {
            std::cerr << "delta must be a real rational\n";
            return int(ExitCode::parse);
        }
        cfg.delta = d->re;
        cfg.delta_set = true;
    }
    if (!input_path.empty()) {
        std::ifstream in(input_path);
        if (!in) {
            std::cerr << "cannot open " << input_path << "\n";
            return int(ExitCode::parse);
        }
        try {
            cfg.operator_json = Json::parse(in);
        } catch (const std::exception &e) {
            std::cerr << "bad JSON: " << e.what() << "\n";
            return int(ExitCode::parse);
        }
    }
    cfg.command = app.get_subcommands().front()->get_name();

    CommandResult result = run_command(cfg);
    if (!result.log.empty()) std::cout << result.log;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        out << result.output;
    } else {
        std::cout << result.output;
    }
    if (result.exit_code != 0) std::cerr << "exit code " << result.exit_code << "\n";
    return result.exit_code;
}
