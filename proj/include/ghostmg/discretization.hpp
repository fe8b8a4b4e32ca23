#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "ghostmg/geometry.hpp"

namespace ghostmg {

/// Lagrange weights of the stencil interpolant and of its gradient at a point.
/// Entry k refers to stencil.members[k].
struct InterpolationWeights {
    std::size_t count = 0;
    std::array<double, 9> value{};
    std::array<double, 9> dx{};
    std::array<double, 9> dy{};
};

/// Tensor-product Lagrange weights matching the stencil extent: biquadratic
/// (3x3), bilinear (2x2), or the plane through the ghost node and the other
/// two members (3-point).
InterpolationWeights interpolation_weights(const StencilSpec& stencil, const GridSpec& spec,
                                           const Point& p);

double biquadratic_eval(const GridFunction& u, const StencilSpec& stencil, const Point& p);
Point biquadratic_grad(const GridFunction& u, const StencilSpec& stencil, const Point& p);

/// Boundary operator L_h at one ghost: interpolated value at B (Dirichlet)
/// or the interpolated gradient dotted with the interpolated level-set normal
/// at B (Neumann).
double bc_apply(const GridFunction& u, const GhostMeta& ghost, const LevelSetField& phi);

/// One equation of the discrete system: sum_k weights[k] * u[cols[k]].
/// Columns are flat node indices.
struct SparseRow {
    std::vector<std::size_t> cols;
    std::vector<double> weights;

    double apply(const GridFunction& u) const {
        double s = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) s += weights[k] * u[cols[k]];
        return s;
    }
    double weight_of(std::size_t col) const;
};

/// Linear weights of bc_apply for this ghost.
SparseRow bc_row(const GhostMeta& ghost, const LevelSetField& phi);

/// Geometry plus cached boundary rows of one grid level.
class DiscreteDomain {
public:
    DiscreteDomain(LevelSetField phi, const BoundarySplit& split);

    const GridSpec& spec() const { return phi_.spec(); }
    const LevelSetField& phi() const { return phi_; }
    const NodeClassMask& mask() const { return mask_; }
    const std::vector<GhostMeta>& ghosts() const { return ghosts_; }
    const std::vector<SparseRow>& bc_rows() const { return bc_rows_; }
    const BoundarySplit& split() const { return split_; }

    /// Ghost number of a flat node index, -1 when not a ghost.
    int ghost_index(std::size_t flat) const { return ghost_of_node_[flat]; }
    /// Interior and ghost nodes in lexicographic order (x major, then y).
    const std::vector<std::size_t>& unknowns() const { return unknowns_; }
    /// Row number in the assembled system, -1 for exterior nodes.
    int unknown_index(std::size_t flat) const { return unknown_of_node_[flat]; }

    bool is_interior(std::size_t flat) const { return mask_[flat] == NodeClass::Interior; }
    bool is_ghost(std::size_t flat) const { return mask_[flat] == NodeClass::Ghost; }

private:
    LevelSetField phi_;
    BoundarySplit split_;
    NodeClassMask mask_;
    std::vector<GhostMeta> ghosts_;
    std::vector<SparseRow> bc_rows_;
    std::vector<int> ghost_of_node_;
    std::vector<std::size_t> unknowns_;
    std::vector<int> unknown_of_node_;
};

/// Right-hand side of the non-eliminated system: f on interior nodes and one
/// boundary value per ghost (indexed like DiscreteDomain::ghosts()).
struct ProblemData {
    GridFunction f;
    std::vector<double> g;
};

ProblemData zero_problem(const DiscreteDomain& domain);

/// Samples f at interior nodes and g at each ghost through the caller's callback.
ProblemData make_problem(const DiscreteDomain& domain,
                         const std::function<double(const Point&)>& f,
                         const std::function<double(const GhostMeta&)>& g);

/// Splits a field holding interior and ghost values into ProblemData.
ProblemData problem_from_field(const GridFunction& rhs, const DiscreteDomain& domain);

/// Defect stored on the full rectangle; exterior non-ghost entries are zero.
using DefectField = GridFunction;

/// Five-point Laplacian at interior nodes, zero elsewhere.
GridFunction apply_laplacian(const GridFunction& u, const NodeClassMask& mask);

/// r = f + Lap_h u on interior nodes, r = g - L_h u on ghosts, 0 elsewhere.
DefectField compute_defect(const GridFunction& u, const ProblemData& prob,
                           const DiscreteDomain& domain);

/// Max norm over interior and ghost nodes.
double defect_norm(const DefectField& r, const DiscreteDomain& domain);

double max_abs(std::span<const double> v);

/// -Lap_h u = f on interior rows, L_h u = g on ghost rows; rows and columns
/// follow DiscreteDomain::unknowns().
struct LinearSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
};

LinearSystem assemble_system(const ProblemData& prob, const DiscreteDomain& domain);

/// Row of the assembled system for one unknown (interior or ghost).
SparseRow system_row(std::size_t flat, const DiscreteDomain& domain);

/// Sparse LU factorization of the level operator.
class DirectSolver {
public:
    explicit DirectSolver(const DiscreteDomain& domain);
    ~DirectSolver();
    DirectSolver(DirectSolver&&) noexcept;
    DirectSolver& operator=(DirectSolver&&) noexcept;

    /// Exact solution of the level system for `prob`; `domain` must be the
    /// one passed to the constructor.
    GridFunction solve(const ProblemData& prob, const DiscreteDomain& domain) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ghostmg
