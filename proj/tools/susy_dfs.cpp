// susy-dfs: command-line front end
//
//   susy-dfs simulate <scenario.json> [--out dir] [--format csv|json]
//   susy-dfs verify --suite algebra|oracle|dfs|susy|all
//   susy-dfs diagonalize <scenario.json>

#include "sdfs/runner.hpp"
#include "sdfs/scenario.hpp"
#include "sdfs/verify.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Oscillator-network simulator for decoherence-free subspaces"};
    app.set_version_flag("--version", sdfs::library_version());
    app.require_subcommand(1);

    std::string scenario_path, out_dir, format = "csv";
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write results");
    simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--out", out_dir, "Output directory (default: print CSV to stdout)");
    simulate->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    std::string suite_name;
    auto* verify = app.add_subcommand("verify", "Run a built-in verification suite");
    verify->add_option("--suite", suite_name, "Suite name")
        ->required()
        ->check(CLI::IsMember({"algebra", "oracle", "dfs", "susy", "all"}));

    std::string diag_path;
    auto* diagonalize = app.add_subcommand("diagonalize", "Dump quasi bases (U, Omega) per sector as JSON");
    diagonalize->add_option("scenario", diag_path, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const sdfs::Scenario s = sdfs::load_scenario(scenario_path);
            const sdfs::RunResult r = sdfs::run_scenario(s);
            const auto fmt = format == "json" ? sdfs::OutputFormat::Json : sdfs::OutputFormat::Csv;
            if (out_dir.empty()) {
                if (fmt == sdfs::OutputFormat::Csv) {
                    sdfs::write_csv(std::cout, r.records);
                } else {
                    auto doc = sdfs::sidecar_json(s, r);
                    doc["records"] = sdfs::records_json(r.records);
                    std::cout << doc.dump(2) << '\n';
                }
            } else {
                for (const auto& p : sdfs::write_outputs(s, r, out_dir, fmt)) std::cerr << "wrote " << p.string() << '\n';
            }
            if (r.tainted)
                std::cerr << "warning: leakage " << r.max_leakage << " exceeds " << sdfs::kLeakageTol
                          << "; results are tainted\n";
            return 0;
        }
        if (*verify) {
            const auto report = sdfs::verify(*sdfs::parse_suite(suite_name));
            sdfs::print_report(std::cout, report);
            return report.ok() ? 0 : 1;
        }
        if (*diagonalize) {
            std::cout << sdfs::diagonalize_json(sdfs::load_scenario(diag_path)).dump(2) << '\n';
            return 0;
        }
    } catch (const sdfs::ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
