#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ghostmg/cycles.hpp"
#include "ghostmg/solver1d.hpp"

namespace ghostmg {

/// Named test domain. The interval has no level set (formula is empty).
struct DomainSpec {
    std::string name;
    LevelSetFormula formula;
    bool needs_reinit = false;
};

/// Throws InvalidArgument for unknown names.
const DomainSpec& domain_spec(const std::string& name);
const std::vector<std::string>& domain_names();

/// Dirichlet on the part of the boundary with x <= 0, Neumann elsewhere.
BcKind left_dirichlet_split(const Point& b);

struct ExperimentArgs {
    std::string domain = "circle";
    int n = 64;
    int n_c = 8;
    int nu1 = 2;
    int nu2 = 1;
    int lambda = 5;
    double delta_h = 3.0;
    CycleKind cycle = CycleKind::W;
    SmootherKind smoother = SmootherKind::GsLex;
    double a = -0.743;  ///< interval endpoints (1D only)
    double b = 0.843;
    RhoOptions rho;
};

struct ExperimentRow {
    std::string domain;
    int n = 0;
    int n_c = 0;
    int nu1 = 0;
    int nu2 = 0;
    int lambda = 0;
    double delta_over_h = 0.0;
    std::string cycle;
    std::string smoother;
    std::optional<double> rho;  ///< absent when the run failed before measuring
    bool converged = false;
    int iterations = 0;
    double wall_ms = 0.0;
    std::string note;  ///< error message of a failed run

    friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// Runs one measurement. Geometry and numerical failures are reported in the
/// row (converged = false, note set); invalid arguments throw.
ExperimentRow run_experiment(const ExperimentArgs& args, SolveReport* report = nullptr);

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
/// Throws InvalidArgument on malformed input.
std::vector<ExperimentRow> read_rows_csv(std::istream& in);

/// Columns iteration,residual,rho; rho is empty for iteration 0.
void emit_residual_history(std::ostream& out, const SolveReport& report);

/// One addressable cell of a published table.
struct TableCell {
    ExperimentArgs args;
    std::optional<double> reference;  ///< published factor; absent for "n.c."
    std::string label;                ///< sub-table or column the cell belongs to
};

struct TableResult {
    TableCell cell;
    ExperimentRow row;
    std::optional<double> abs_diff;
    bool flagged = false;  ///< |measured - reference| > 0.05, or convergence status differs
};

const std::vector<std::string>& table_ids();
/// Cells of a table id. Throws InvalidArgument for unknown ids.
std::vector<TableCell> table_cells(const std::string& id);

/// Runs every cell; per-cell failures are recorded and the run continues.
std::vector<TableResult> run_table(const std::string& id);

void write_table_csv(std::ostream& out, const std::vector<TableResult>& results);
void write_table_markdown(std::ostream& out, const std::vector<TableResult>& results);

/// Data behind the smoother comparison on the circle with a two-grid cycle.
struct SmootherComparison {
    struct RhoPoint {
        SmootherKind smoother;
        int lambda;
        ExperimentRow row;
    };
    struct MuPoint {
        SmootherKind smoother;
        int lambda;
        int m;
        double mu;
    };
    std::vector<RhoPoint> rho;
    std::vector<MuPoint> mu;
};

/// Block relaxation ignores lambda and is measured once (reported with lambda = 0).
SmootherComparison run_smoother_comparison(int n, const std::vector<int>& lambdas, int nu1 = 1,
                                           int nu2 = 1, int mu_iterations = 10);

/// Columns series,smoother,lambda,m,value with series rho (m empty) or mu.
void write_comparison_csv(std::ostream& out, const SmootherComparison& cmp);

}  // namespace ghostmg
