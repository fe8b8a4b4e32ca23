#pragma once

#include <array>
#include <vector>

#include "ghostmg/cycles.hpp"

namespace ghostmg {

/// Interval [a,b] embedded in the grid x_j = -1 + j h, h = 2/N.
/// Ghosts are x_l <= a < x_{l+1} and x_{r-1} < b <= x_r.
struct Interval1D {
    double a = 0.0;
    double b = 0.0;
    int n = 0;
    double h = 0.0;
    int l = 0;
    int r = 0;
    double theta_l = 1.0;  ///< (x_{l+1} - a)/h
    double theta_r = 1.0;  ///< (b - x_{r-1})/h

    double x(int j) const { return -1.0 + j * h; }
    bool is_interior(int j) const { return j > l && j < r; }
    bool is_unknown(int j) const { return j >= l && j <= r; }
};

/// Throws InvalidArgument unless -1 < a < b < 1, N is even and >= 4, and the
/// interval holds at least one interior node.
Interval1D make_interval(double a, double b, int n);

struct Constants1D {
    double dt = 0.0;
    double mu_d = 0.0;
    double mu_n = 0.0;

    /// dt = h^2/2, mu_D = 1.8/h^2, mu_N = 1.2/h.
    static Constants1D for_spacing(double h);
};

/// -u'' = f on the interior, Dirichlet value g_a at a, derivative g_b at b.
struct Problem1D {
    std::vector<double> f;  ///< indexed by node, read on interior nodes only
    double g_a = 0.0;
    double g_b = 0.0;
};

/// Weights on (u_l, u_{l+1}, u_{l+2}) of the quadratic interpolant evaluated at a.
std::array<double, 3> dirichlet_weights(double theta_l);
/// Weights on (u_{r-2}, u_{r-1}, u_r) of the quadratic interpolant's derivative at b.
std::array<double, 3> neumann_weights(double theta_r, double h);

double dirichlet_operator(const std::vector<double>& u, const Interval1D& iv);
double neumann_operator(const std::vector<double>& u, const Interval1D& iv);

/// One Gauss-Seidel pass: left ghost, interior left to right, right ghost.
void relax_1d(std::vector<double>& u, const Problem1D& prob, const Interval1D& iv,
              const Constants1D& c);

struct Defect1D {
    std::vector<double> interior;  ///< f + u'' on interior nodes, 0 elsewhere
    double left = 0.0;             ///< g_a - g_D^h(u)
    double right = 0.0;            ///< g_b - g_N^h(u)

    double norm() const;
};

Defect1D defect_1d(const std::vector<double>& u, const Problem1D& prob, const Interval1D& iv);

/// Full weighting on coarse interior nodes, (1/2,1/2) towards the inside when a
/// fine neighbour is not interior; coarse nodes outside the interior are 0.
std::vector<double> restrict_1d(const std::vector<double>& r, const Interval1D& fine,
                                const Interval1D& coarse);

/// Linear interpolation onto all fine nodes.
std::vector<double> interpolate_1d(const std::vector<double>& e);

/// Exact solution of the level system (dense LU); zero outside the unknowns.
std::vector<double> direct_solve_1d(const Problem1D& prob, const Interval1D& iv);

struct Config1D {
    int nu1 = 1;
    int nu2 = 1;
    CycleKind kind = CycleKind::W;
    RhoOptions rho;
};

/// Multigrid convergence-factor measurement on the homogeneous problem,
/// starting from sin(40 pi x) on the unknowns (or from u0 when given).
/// Throws InvalidArgument for a zero initial guess.
SolveReport solve_1d(double a, double b, int n, int n_coarsest, const Config1D& cfg,
                     const std::vector<double>* u0 = nullptr);

}  // namespace ghostmg
