#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ghostmg/smoothers.hpp"
#include "ghostmg/transfer.hpp"

namespace ghostmg {

enum class CycleKind { Tgcs, V, W };

const char* to_string(CycleKind k);
CycleKind parse_cycle_kind(const std::string& s);

struct CycleConfig {
    int nu1 = 1;
    int nu2 = 1;
    CycleKind kind = CycleKind::W;
    SmootherConfig smoother;
    ExtensionConfig extension;
    /// Extend the coarse-grid error into the exterior band before prolongation.
    bool extend_correction = true;
    /// Restrict Dirichlet and Neumann boundary defects separately.
    bool split_bc_restriction = true;

    /// Coarse-grid visits per level: 1 for V (and TGCS), 2 for W.
    int gamma() const { return kind == CycleKind::W ? 2 : 1; }
    void validate() const;
};

/// One grid level with its precomputed smoothing and transfer data.
struct Level {
    Level(LevelSetField phi, const BoundarySplit& split, const CycleConfig& cfg);

    DiscreteDomain domain;
    LevelSmoother smoother;
    ExtensionPlan extension;
    std::vector<SupportTag> support;
};

/// Grid levels from finest (index 0) to coarsest, each rediscretized on its own
/// grid from an injected level set, with the coarsest operator factorized.
class Hierarchy {
public:
    /// Throws InvalidArgument on bad sizes and GeometryError if any level fails.
    Hierarchy(const LevelSetField& finest, int n_coarsest, const BoundarySplit& split,
              const CycleConfig& cfg);

    std::size_t size() const { return levels_.size(); }
    const Level& level(std::size_t k) const { return *levels_[k]; }
    const Level& finest() const { return *levels_.front(); }
    const DirectSolver& coarse_solver() const { return *coarse_solver_; }
    const CycleConfig& config() const { return cfg_; }

private:
    CycleConfig cfg_;
    std::vector<std::unique_ptr<Level>> levels_;
    std::unique_ptr<DirectSolver> coarse_solver_;
};

/// Reinitialization band (and step budget) that keeps every level of an
/// (n, n_coarsest) hierarchy supplied with signed-distance samples.
double hierarchy_reinit_band(int n_coarsest);
int hierarchy_reinit_steps(int n, int n_coarsest);

/// Samples the formula on the finest grid, optionally reinitializes it, and
/// builds the levels N, N/2, ..., n_coarsest.
Hierarchy build_hierarchy(const LevelSetFormula& formula, int n, int n_coarsest, bool reinit,
                          const BoundarySplit& split, const CycleConfig& cfg);

/// One multigrid cycle at `level` for the system with right-hand side `prob`.
void mg_cycle(GridFunction& u, const ProblemData& prob, const Hierarchy& hier,
              std::size_t level = 0);

struct SolveReport {
    std::vector<double> residuals;  ///< |r^(m)|_inf, m = 0..iterations
    std::vector<double> rho;        ///< rho^(m) = |r^(m)|/|r^(m-1)|, m = 1..iterations
    double final_rho = 0.0;
    int iterations = 0;
    bool converged = false;   ///< the iteration contracts (and, for solve_general, met its tolerance)
    bool stabilized = false;  ///< the relative change of rho dropped below the tolerance
    bool diverged = false;    ///< five consecutive rho^(m) >= 1
    double wall_ms = 0.0;
};

/// Oscillatory start u0 = sin(40 pi x) sin(50 pi y) on interior and ghost
/// nodes; replaced by seeded uniform noise on grids where it vanishes.
GridFunction default_initial_guess(const DiscreteDomain& domain);

struct RhoOptions {
    double tolerance = 1e-3;  ///< on |rho^(m) - rho^(m-1)| / rho^(m)
    int min_iterations = 5;
    int max_iterations = 300;
};

/// Runs `cycle` (one iteration, returning the new defect norm) from defect
/// norm r0 until rho^(m) < 1 stabilizes, five consecutive rho^(m) >= 1 occur, the
/// defect vanishes or underflows, or the iteration budget runs out.
SolveReport measure_convergence(double r0, const std::function<double()>& cycle,
                                const RhoOptions& opts);

/// Convergence-factor measurement on the homogeneous problem f = g = 0.
/// Throws InvalidArgument when u0 has zero defect.
SolveReport solve_homogeneous(const Hierarchy& hier, GridFunction u0, const RhoOptions& opts = {});

/// Cycles from a zero guess until |r|_inf <= tol_abs * max(|f|,|g|,1).
std::pair<GridFunction, SolveReport> solve_general(const Hierarchy& hier, const ProblemData& prob,
                                                   double tol_abs, int max_iterations);

}  // namespace ghostmg
