#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ghostmg/bench.hpp"

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::vector<int> parse_lambdas(const std::string& list) {
    std::vector<int> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw ghostmg::InvalidArgument("empty lambda list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ghost-point multigrid for Poisson problems on embedded domains"};
    app.require_subcommand(1);

    ghostmg::ExperimentArgs args;
    std::string cycle = "w";
    std::string smoother = "gslex";
    std::string run_out;
    std::string history_out;
    auto* run = app.add_subcommand("run", "Measure the convergence factor of one configuration");
    run->add_option("--domain", args.domain, "circle, ellipse, saddle, flower or interval")
        ->check(CLI::IsMember(ghostmg::domain_names()));
    run->add_option("--N", args.n, "Finest grid subdivisions per axis");
    run->add_option("--Nc", args.n_c, "Coarsest grid subdivisions per axis");
    run->add_option("--nu1", args.nu1, "Pre-smoothing steps");
    run->add_option("--nu2", args.nu2, "Post-smoothing steps");
    run->add_option("--lambda", args.lambda, "Extra boundary relaxations per sweep");
    run->add_option("--delta", args.delta_h, "Boundary band half-width in units of h");
    run->add_option("--cycle", cycle, "tgcs, v or w")->check(CLI::IsMember({"tgcs", "v", "w"}));
    run->add_option("--smoother", smoother, "gslex, kaczmarz or block")
        ->check(CLI::IsMember({"gslex", "kaczmarz", "block"}));
    run->add_option("--a", args.a, "Left end of the interval (1D)");
    run->add_option("--b", args.b, "Right end of the interval (1D)");
    run->add_option("--out", run_out, "CSV file for the result row (stdout if omitted)");
    run->add_option("--history", history_out, "CSV file for the residual history");

    std::string table_id;
    std::string table_out;
    auto* table = app.add_subcommand("table", "Reproduce every cell of a convergence table");
    table->add_option("--id", table_id, "Table id")->required()->check(CLI::IsMember(ghostmg::table_ids()));
    table->add_option("--out", table_out, "CSV file (stdout if omitted)");

    int cmp_n = 64;
    std::string cmp_lambdas = "0,1,2,3,4,5,6,7,8";
    std::string cmp_out;
    auto* cmp = app.add_subcommand("compare-smoothers", "Smoothing and convergence factors per smoother");
    cmp->add_option("--N", cmp_n, "Grid subdivisions per axis");
    cmp->add_option("--lambdas", cmp_lambdas, "Comma-separated extra-relaxation counts");
    cmp->add_option("--out", cmp_out, "CSV file (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            args.cycle = ghostmg::parse_cycle_kind(cycle);
            args.smoother = ghostmg::parse_smoother_kind(smoother);
            ghostmg::SolveReport report;
            const auto row = ghostmg::run_experiment(args, &report);
            if (run_out.empty()) {
                ghostmg::write_rows_csv(std::cout, {row});
            } else {
                auto out = open_output(run_out);
                ghostmg::write_rows_csv(out, {row});
            }
            if (!history_out.empty()) {
                auto out = open_output(history_out);
                ghostmg::emit_residual_history(out, report);
            }
        } else if (*table) {
            const auto results = ghostmg::run_table(table_id);
            if (table_out.empty()) {
                ghostmg::write_table_csv(std::cout, results);
            } else {
                auto out = open_output(table_out);
                ghostmg::write_table_csv(out, results);
                ghostmg::write_table_markdown(std::cout, results);
            }
        } else if (*cmp) {
            const auto data = ghostmg::run_smoother_comparison(cmp_n, parse_lambdas(cmp_lambdas));
            if (cmp_out.empty()) {
                ghostmg::write_comparison_csv(std::cout, data);
            } else {
                auto out = open_output(cmp_out);
                ghostmg::write_comparison_csv(out, data);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "ghostmg: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
