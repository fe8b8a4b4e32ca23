#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ghostmg/discretization.hpp"

namespace ghostmg {

enum class SmootherKind { GsLex, Kaczmarz, Block };

const char* to_string(SmootherKind k);
SmootherKind parse_smoother_kind(const std::string& s);

/// Upper bound (exclusive) for mu_N * dt on a grid of spacing h.
inline double neumann_cfl_bound(double h) { return 2.0 * h / (3.0 * 1.4142135623730951); }

struct SmootherConfig {
    SmootherKind kind = SmootherKind::GsLex;
    int lambda = 0;             ///< extra boundary passes after every sweep
    double delta_h = 3.0;       ///< band half-width in units of the level spacing
    double mu_d_dt = 0.9;       ///< Dirichlet pseudo-time factor, in (0,1)
    double mu_n_fraction = 0.9; ///< mu_N dt as a fraction of neumann_cfl_bound(h), in (0,1)

    double mu_n_dt(double h) const { return mu_n_fraction * neumann_cfl_bound(h); }

    /// Throws InvalidArgument when a CFL bound or a count is violated.
    void validate() const;
};

/// Config from absolute pseudo-time factors on a grid of spacing h; rejects
/// values outside the CFL bounds.
SmootherConfig make_smoother_config(SmootherKind kind, int lambda, double delta_h, double mu_d_dt,
                                    double mu_n_dt, double h);

/// Ghosts and interior nodes with |phi| <= delta, in lexicographic order.
struct BoundaryBand {
    std::vector<std::size_t> nodes;
};

BoundaryBand build_band(const DiscreteDomain& domain, double delta);

/// Interior nodes with |phi| > delta, in lexicographic order.
std::vector<std::size_t> far_interior_nodes(const DiscreteDomain& domain, double delta);

/// One Gauss-Seidel update of a single unknown: the Jacobi-form interior
/// relaxation or the pseudo-time ghost relaxation, with freshest values.
void relax_node(GridFunction& u, std::size_t flat, const ProblemData& prob,
                const DiscreteDomain& domain, const SmootherConfig& cfg);

/// In-place GS-LEX pass over every interior and ghost node.
void gs_lex_sweep(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                  const SmootherConfig& cfg);

/// cfg.lambda GS passes restricted to the band.
void boundary_extra_sweeps(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                           const BoundaryBand& band, const SmootherConfig& cfg);

/// Row with its right-hand side, as used by row-action methods.
struct RowEquation {
    SparseRow row;
    double rhs = 0.0;
};

/// Kaczmarz projections u += (rhs - <l,u>)/|l|^2 * l, one per equation, in order.
/// Throws NumericalError on a zero row.
void kaczmarz_sweep(GridFunction& u, const std::vector<RowEquation>& equations);

/// Equations (rows and right-hand sides) of the listed unknowns.
std::vector<RowEquation> gather_equations(const std::vector<std::size_t>& nodes,
                                          const ProblemData& prob, const DiscreteDomain& domain);

/// Unknowns whose equations form the block solved around node p.
std::vector<std::size_t> block_stencil(std::size_t p, const DiscreteDomain& domain);

/// Solves the block of equations owned by `block` for those unknowns, others frozen.
/// Throws NumericalError when the block's condition number exceeds 1e12.
void solve_block(GridFunction& u, const std::vector<std::size_t>& block, const ProblemData& prob,
                 const DiscreteDomain& domain);

/// GS over the far interior, then block solves at every band node.
void block_sweep(GridFunction& u, const ProblemData& prob, const DiscreteDomain& domain,
                 const SmootherConfig& cfg);

/// Precomputed smoothing data of one level; `smooth` performs one full
/// smoothing step of the configured kind.
class LevelSmoother {
public:
    LevelSmoother(const DiscreteDomain& domain, const SmootherConfig& cfg);

    void smooth(GridFunction& u, const ProblemData& prob) const;

    const BoundaryBand& band() const { return band_; }
    const SmootherConfig& config() const { return cfg_; }

private:
    struct Block {
        std::vector<std::size_t> nodes;
        std::vector<SparseRow> rows;
        Eigen::MatrixXd inverse;
    };

    void smooth_far_interior(GridFunction& u, const ProblemData& prob) const;
    void smooth_kaczmarz(GridFunction& u, const ProblemData& prob) const;
    void smooth_block(GridFunction& u, const ProblemData& prob) const;

    const DiscreteDomain* domain_;
    SmootherConfig cfg_;
    BoundaryBand band_;
    std::vector<std::size_t> far_interior_;
    std::vector<SparseRow> band_rows_;
    std::vector<double> band_row_norm2_;
    std::vector<Block> blocks_;
};

/// mu^(m) = |r^(m)|/|r^(m-1)| for m = 1..m_max applying only the smoother.
/// Stops early if a defect becomes exactly zero.
std::vector<double> smoothing_factor_series(const DiscreteDomain& domain, const SmootherConfig& cfg,
                                            const ProblemData& prob, GridFunction u0, int m_max);

}  // namespace ghostmg
