/// @file test_bench.cpp
/// @brief Domain registry, experiment rows, CSV output and table definitions.

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

using namespace ghostmg;

TEST_CASE("registered level sets match their closed forms") {
    const double s3 = std::sqrt(3.0);
    const double c6 = std::cos(std::numbers::pi / 6.0);
    const double s6 = std::sin(std::numbers::pi / 6.0);
    auto circle = [](double x, double y) {
        return std::sqrt(std::pow(x - std::sqrt(2.0) / 20.0, 2) + std::pow(y - std::sqrt(3.0) / 30.0, 2)) - 0.563;
    };
    auto ellipse = [&](double x, double y) {
        const double X = c6 * x - s6 * y;
        const double Y = s6 * x + c6 * y;
        return std::pow(X - std::sqrt(2.0) / 20.0, 2) / (0.563 * 0.563) +
               std::pow(Y - std::sqrt(3.0) / 30.0, 2) / (0.263 * 0.263) - 1.0;
    };
    auto saddle = [&](double x, double y) {
        const double t = 1.5 * s3 * x + 1.5 * y - 1.0;
        return 9.0 * std::pow(x / 2.0 - s3 / 2.0 * y, 2) + t * t * std::sin(t) - 1.0;
    };
    auto flower = [](double x, double y) {
        const double r = std::sqrt(x * x + y * y);
        return r - 0.5 - (std::pow(y, 5) + 5.0 * std::pow(x, 4) * y - 10.0 * x * x * std::pow(y, 3)) /
                             (5.0 * std::pow(r, 5));
    };
    const std::vector<std::pair<std::string, std::function<double(double, double)>>> cases{
        {"circle", circle}, {"ellipse", ellipse}, {"saddle", saddle}, {"flower", flower}};
    for (const auto& [name, ref] : cases) {
        const DomainSpec& d = domain_spec(name);
        CHECK(d.needs_reinit == (name != "circle"));
        for (double x = -0.95; x < 1.0; x += 0.173) {
            for (double y = -0.97; y < 1.0; y += 0.211) {
                CHECK(d.formula(x, y) == doctest::Approx(ref(x, y)).epsilon(1e-12));
            }
        }
    }
    CHECK_FALSE(static_cast<bool>(domain_spec("interval").formula));
    CHECK_THROWS_AS(domain_spec("square"), InvalidArgument);
    CHECK(domain_names().size() == 5);
}

TEST_CASE("boundary split") {
    CHECK(left_dirichlet_split({-0.3, 0.2}) == BcKind::Dirichlet);
    CHECK(left_dirichlet_split({0.0, 0.5}) == BcKind::Dirichlet);
    CHECK(left_dirichlet_split({1e-9, -0.5}) == BcKind::Neumann);
}

TEST_CASE("experiment rows round-trip through CSV") {
    ExperimentRow a;
    a.domain = "circle";
    a.n = 64;
    a.n_c = 8;
    a.nu1 = 2;
    a.nu2 = 1;
    a.lambda = 5;
    a.delta_over_h = 3.0;
    a.cycle = "w";
    a.smoother = "gslex";
    a.rho = 0.1234567890123456789;
    a.converged = true;
    a.iterations = 17;
    a.wall_ms = 12.5;
    ExperimentRow b = a;
    b.domain = "flower";
    b.rho.reset();
    b.converged = false;
    b.note = "geometry: node (3, 4), \"quoted\"";

    std::stringstream ss;
    write_rows_csv(ss, {a, b});
    const std::string text = ss.str();
    CHECK(text.rfind("domain,N,N_c,nu1,nu2,lambda,delta_over_h,cycle,smoother,rho,converged,iterations,wall_ms,note\n", 0) == 0);
    CHECK(text.find("0.1234567890123456") != std::string::npos);
    const auto rows = read_rows_csv(ss);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == a);
    CHECK(rows[1] == b);

    std::stringstream bad("domain,N\ncircle,64\n");
    CHECK_THROWS_AS(read_rows_csv(bad), InvalidArgument);
    std::stringstream short_line(text.substr(0, text.find('\n') + 1) + "circle,64,8\n");
    CHECK_THROWS_AS(read_rows_csv(short_line), InvalidArgument);
}

TEST_CASE("residual history") {
    SolveReport rep;
    rep.residuals = {1.0, 0.5, 0.125};
    rep.rho = {0.5, 0.25};
    rep.iterations = 2;
    std::stringstream ss;
    emit_residual_history(ss, rep);
    CHECK(ss.str() == "iteration,residual,rho\n0,1,\n1,0.5,0.5\n2,0.125,0.25\n");
}

TEST_CASE("experiments") {
    ExperimentArgs args;
    args.n = 32;
    args.n_c = 8;
    SolveReport rep;
    const ExperimentRow first = run_experiment(args, &rep);
    CHECK(first.converged);
    REQUIRE(first.rho.has_value());
    CHECK(*first.rho == rep.final_rho);
    CHECK(first.iterations == rep.iterations);
    ExperimentRow second = run_experiment(args);
    second.wall_ms = first.wall_ms;
    CHECK(second == first);

    args.n_c = 32;
    CHECK_THROWS_AS(run_experiment(args), InvalidArgument);

    ExperimentArgs flower;
    flower.domain = "flower";
    flower.n = 32;
    flower.n_c = 8;
    flower.nu1 = 2;
    flower.nu2 = 1;
    const ExperimentRow f = run_experiment(flower);
    CHECK_FALSE(f.converged);
    CHECK_FALSE(f.note.empty());

    ExperimentArgs line;
    line.domain = "interval";
    line.n = 64;
    line.nu1 = 2;
    line.nu2 = 0;
    line.cycle = CycleKind::V;
    const ExperimentRow l = run_experiment(line);
    CHECK(l.converged);
    CHECK(l.rho.has_value());
}

TEST_CASE("table definitions") {
    CHECK(table_ids().size() == 6);
    CHECK(table_cells("badrho").size() == 18);
    CHECK(table_cells("rhoC").size() == 30);
    CHECK(table_cells("rhoE").size() == 30);
    CHECK(table_cells("rhoSF3-left").size() == 15);
    const auto flower = table_cells("rhoSF3-right");
    REQUIRE(flower.size() == 15);
    int nc = 0;
    for (const auto& c : flower) {
        CHECK(c.args.n > c.args.n_c);
        if (!c.reference) {
            ++nc;
            CHECK(c.args.n_c == 8);
        }
    }
    CHECK(nc == 5);
    CHECK(table_cells("1d").size() == 2);
    CHECK_THROWS_AS(table_cells("table9"), InvalidArgument);

    const auto results = run_table("1d");
    REQUIRE(results.size() == 2);
    std::stringstream csv;
    write_table_csv(csv, results);
    std::string header;
    std::getline(csv, header);
    CHECK(header.find("reference_rho,abs_diff,flagged") != std::string::npos);
    std::stringstream md;
    write_table_markdown(md, results);
    CHECK(md.str().find("| label |") == 0);
}

TEST_CASE("smoother comparison output") {
    const SmootherComparison cmp = run_smoother_comparison(16, {0, 1}, 1, 1, 3);
    CHECK(cmp.rho.size() == 5);
    CHECK(cmp.mu.size() == 15);
    std::stringstream ss;
    write_comparison_csv(ss, cmp);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "series,smoother,lambda,m,value");
    int lines = 0;
    for (std::string l; std::getline(ss, l);) ++lines;
    CHECK(lines == 20);
}
