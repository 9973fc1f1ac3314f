#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "routersim/harness.hpp"
#include "routersim/plot.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitSimError = 3;
constexpr int kExitOracleFailure = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace routersim;

    CLI::App app{"Discrete-event simulator of a one-repeater entanglement network"};
    app.require_subcommand(1);

    // run <config>
    std::string run_config;
    CLI::App* run_cmd = app.add_subcommand("run", "Simulate a single configuration point");
    run_cmd->add_option("config", run_config, "configuration file")->required();

    // sweep <config> --m ... --L ... --arch ... --runs N --out file
    std::string sweep_config, sweep_arch = "both", sweep_out = "results.csv";
    std::vector<int> sweep_m;
    std::vector<double> sweep_l;
    int sweep_runs = 3;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep multiplexing and distance, write CSV");
    sweep_cmd->add_option("config", sweep_config, "base configuration file")->required();
    sweep_cmd->add_option("--m", sweep_m, "register counts to sweep")->required();
    sweep_cmd->add_option("--L", sweep_l, "distances in km to sweep")->required();
    sweep_cmd->add_option("--arch", sweep_arch, "router | routerless | both")
        ->check(CLI::IsMember({"router", "routerless", "both"}));
    sweep_cmd->add_option("--runs", sweep_runs, "independent runs per point");
    sweep_cmd->add_option("--out", sweep_out, "output CSV path");

    // oracle <scenario> <config>
    std::string oracle_scenario, oracle_config;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Compare a scenario against its analytic law");
    oracle_cmd->add_option("scenario", oracle_scenario, "registered scenario name")->required();
    oracle_cmd->add_option("config", oracle_config, "configuration file")->required();

    // plot <csv> --kind ... --out file
    std::string plot_csv, plot_kind = "rate", plot_out = "plot.svg";
    CLI::App* plot_cmd = app.add_subcommand("plot", "Render a sweep CSV as an SVG chart");
    plot_cmd->add_option("csv", plot_csv, "sweep CSV produced by the sweep subcommand")->required();
    plot_cmd->add_option("--kind", plot_kind, "rate | infidelity | ratio")
        ->check(CLI::IsMember({"rate", "infidelity", "ratio"}));
    plot_cmd->add_option("--out", plot_out, "output SVG path");

    CLI::App* defaults_cmd = app.add_subcommand("defaults", "Print every configuration key and default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            SimConfig cfg;
            try {
                cfg = harness::parse_config_file(run_config);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            }
            const harness::PointResult point = harness::run_point(cfg, cfg.runs_per_point);
            std::cout << harness::to_csv({point.row});
            return 0;
        }

        if (*sweep_cmd) {
            SimConfig cfg;
            harness::SweepGrid grid;
            try {
                cfg = harness::parse_config_file(sweep_config);
                grid.m_values = sweep_m;
                grid.l_values_km = sweep_l;
                grid.runs_per_point = sweep_runs;
                if (sweep_arch == "router")
                    grid.architectures = {Architecture::Router};
                else if (sweep_arch == "routerless")
                    grid.architectures = {Architecture::Routerless};
                else
                    grid.architectures = {Architecture::Router,
                                          Architecture::Routerless};
                if (sweep_runs < 1) throw std::invalid_argument("--runs must be >= 1");
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            }
            const std::vector<harness::SummaryRow> rows = harness::sweep(grid, cfg);
            write_file(sweep_out, harness::to_csv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << sweep_out << "\n";
            return 0;
        }

        if (*oracle_cmd) {
            SimConfig cfg;
            try {
                cfg = harness::parse_config_file(oracle_config);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            }
            harness::OracleReport report;
            try {
                report = harness::oracle_check(oracle_scenario, cfg);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                std::cerr << "registered scenarios:";
                for (const std::string& name : harness::oracle_scenarios()) std::cerr << " " << name;
                std::cerr << "\n";
                return kExitConfigError;
            }
            for (const std::string& line : report.lines) std::cout << line << "\n";
            std::cout << (report.pass ? "ORACLE PASS" : "ORACLE FAIL") << "\n";
            return report.pass ? 0 : kExitOracleFailure;
        }

        if (*plot_cmd) {
            std::vector<harness::SummaryRow> rows;
            plot::PlotKind kind;
            try {
                rows = harness::parse_csv(read_file(plot_csv));
                kind = plot::parse_plot_kind(plot_kind);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            }
            std::string svg;
            try {
                svg = plot::render_plot(rows, kind);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitConfigError;
            }
            write_file(plot_out, svg);
            std::cout << "wrote " << plot_out << "\n";
            return 0;
        }

        if (*defaults_cmd) {
            std::cout << harness::defaults_table();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimError;
    }
    return 0;
}
