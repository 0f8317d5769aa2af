// ncg: run verification scenarios and list the scenario schema.
//
//   ncg run <scenario.json> --out <dir> [--jobs N] [--tol-scale X]
//   ncg list-checks
//
// Exit codes: 0 every check passed, 1 a check failed, 2 parse or usage
// error, 3 a scenario raised an error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "ncg/scenario.hpp"

namespace fs = std::filesystem;
using ncg::cli::json;

namespace {

int run(const std::string& file, const std::string& out_dir, int jobs, double tol_scale) {
    std::optional<std::uint64_t> seed_override;
    std::vector<ncg::cli::Scenario> scenarios;
    try {
        if (const char* env = std::getenv("NCG_SEED"); env && *env) seed_override = ncg::cli::parse_seed_override(env);
        std::ifstream in(file);
        if (!in) throw ncg::cli::ParseError("cannot open scenario file " + file);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ncg::cli::ParseError(file + ": " + e.what());
        }
        scenarios = ncg::cli::parse_scenarios(j, seed_override);
    } catch (const ncg::Error& e) {
        std::cerr << "ncg: " << e.what() << '\n';
        return 2;
    }

    const ncg::cli::RunResult result = ncg::cli::run_all(scenarios, jobs, tol_scale);
    try {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "report.json") << result.report.dump(2) << '\n';
        for (const auto& a : result.artifacts) std::ofstream(fs::path(out_dir) / a.filename) << a.content;
    } catch (const std::exception& e) {
        std::cerr << "ncg: cannot write output: " << e.what() << '\n';
        return 3;
    }
    for (const auto& e : result.errors) std::cerr << "ncg: " << e << '\n';
    for (const auto& row : result.report) {
        if (!row["passed"].get<bool>()) {
            std::cerr << "ncg: FAILED " << row["kind"].get<std::string>() << '/' << row["check_name"].get<std::string>()
                      << " residual " << row["residual"].dump() << " > tolerance " << row["tolerance"].dump() << '\n';
        }
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification workbench for finite spectral triples, quantum dynamical semigroups and dilations"};
    app.require_subcommand(1);

    std::string file;
    std::string out_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    double tol_scale = 1.0;
    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file (object or array of scenarios)");
    run_cmd->add_option("scenario", file, "scenario JSON file")->required();
    run_cmd->add_option("--out", out_dir, "output directory for report.json and tables")->required();
    run_cmd->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
    run_cmd->add_option("--tol-scale", tol_scale, "multiply every tolerance")->check(CLI::NonNegativeNumber);

    CLI::App* list_cmd = app.add_subcommand("list-checks", "print every scenario kind with its parameters and checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*list_cmd) {
        std::cout << ncg::cli::schema_to_json(ncg::cli::schema()).dump(2) << '\n';
        return 0;
    }
    try {
        return run(file, out_dir, jobs, tol_scale);
    } catch (const std::exception& e) {
        std::cerr << "ncg: internal error: " << e.what() << '\n';
        return 3;
    }
}
