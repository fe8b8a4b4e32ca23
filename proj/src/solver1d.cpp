#include "ghostmg/solver1d.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace ghostmg {

Interval1D make_interval(double a, double b, int n) {
    if (!(a > -1.0 && a < b && b < 1.0)) throw InvalidArgument("interval needs -1 < a < b < 1");
    if (n < 4 || n % 2 != 0) throw InvalidArgument("N must be even and at least 4");
    Interval1D iv;
    iv.a = a;
    iv.b = b;
    iv.n = n;
    iv.h = 2.0 / n;
    iv.l = static_cast<int>(std::floor((a + 1.0) / iv.h));
    while (iv.x(iv.l + 1) <= a) ++iv.l;
    while (iv.x(iv.l) > a) --iv.l;
    iv.r = static_cast<int>(std::ceil((b + 1.0) / iv.h));
    while (iv.x(iv.r - 1) >= b) --iv.r;
    while (iv.x(iv.r) < b) ++iv.r;
    iv.theta_l = (iv.x(iv.l + 1) - a) / iv.h;
    iv.theta_r = (b - iv.x(iv.r - 1)) / iv.h;
    if (iv.r - iv.l < 2) {
        throw InvalidArgument("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                              "] has no interior node for N=" + std::to_string(n));
    }
    return iv;
}

Constants1D Constants1D::for_spacing(double h) { return {h * h / 2.0, 1.8 / (h * h), 1.2 / h}; }

std::array<double, 3> dirichlet_weights(double t) {
    return {(1.0 + t) * t / 2.0, (1.0 + t) * (1.0 - t), -(1.0 - t) * t / 2.0};
}

std::array<double, 3> neumann_weights(double t, double h) {
    return {(t - 0.5) / h, -2.0 * t / h, (0.5 + t) / h};
}

double dirichlet_operator(const std::vector<double>& u, const Interval1D& iv) {
    const auto w = dirichlet_weights(iv.theta_l);
    return w[0] * u[iv.l] + w[1] * u[iv.l + 1] + w[2] * u[iv.l + 2];
}

double neumann_operator(const std::vector<double>& u, const Interval1D& iv) {
    const auto w = neumann_weights(iv.theta_r, iv.h);
    return w[0] * u[iv.r - 2] + w[1] * u[iv.r - 1] + w[2] * u[iv.r];
}

void relax_1d(std::vector<double>& u, const Problem1D& prob, const Interval1D& iv,
              const Constants1D& c) {
    u[iv.l] += c.mu_d * c.dt * (prob.g_a - dirichlet_operator(u, iv));
    const double h2 = iv.h * iv.h;
    for (int j = iv.l + 1; j < iv.r; ++j) u[j] = 0.5 * (u[j - 1] + u[j + 1] + h2 * prob.f[j]);
    u[iv.r] += c.mu_n * c.dt * (prob.g_b - neumann_operator(u, iv));
}

double Defect1D::norm() const {
    double m = std::max(std::abs(left), std::abs(right));
    for (double v : interior) m = std::max(m, std::abs(v));
    return m;
}

Defect1D defect_1d(const std::vector<double>& u, const Problem1D& prob, const Interval1D& iv) {
    Defect1D d;
    d.interior.assign(u.size(), 0.0);
    const double h2 = iv.h * iv.h;
    for (int j = iv.l + 1; j < iv.r; ++j) {
        d.interior[j] = prob.f[j] + (u[j - 1] - 2.0 * u[j] + u[j + 1]) / h2;
    }
    d.left = prob.g_a - dirichlet_operator(u, iv);
    d.right = prob.g_b - neumann_operator(u, iv);
    return d;
}

std::vector<double> restrict_1d(const std::vector<double>& r, const Interval1D& fine,
                                const Interval1D& coarse) {
    if (coarse.n * 2 != fine.n) throw InvalidArgument("restriction needs a coarse grid of N/2");
    std::vector<double> out(coarse.n + 1, 0.0);
    for (int c = coarse.l + 1; c < coarse.r; ++c) {
        const int j = 2 * c;
        const bool left = fine.is_interior(j - 1);
        const bool right = fine.is_interior(j + 1);
        if (left && right) {
            out[c] = 0.25 * r[j - 1] + 0.5 * r[j] + 0.25 * r[j + 1];
        } else if (right) {
            out[c] = 0.5 * (r[j] + r[j + 1]);
        } else if (left) {
            out[c] = 0.5 * (r[j - 1] + r[j]);
        } else {
            out[c] = r[j];
        }
    }
    return out;
}

std::vector<double> interpolate_1d(const std::vector<double>& e) {
    const std::size_t nc = e.size() - 1;
    std::vector<double> out(2 * nc + 1, 0.0);
    for (std::size_t c = 0; c <= nc; ++c) out[2 * c] = e[c];
    for (std::size_t j = 1; j < 2 * nc; j += 2) out[j] = 0.5 * (out[j - 1] + out[j + 1]);
    return out;
}

std::vector<double> direct_solve_1d(const Problem1D& prob, const Interval1D& iv) {
    const int m = iv.r - iv.l + 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m);
    const auto wd = dirichlet_weights(iv.theta_l);
    const auto wn = neumann_weights(iv.theta_r, iv.h);
    for (int k = 0; k < 3; ++k) a(0, k) = wd[k];
    rhs(0) = prob.g_a;
    const double h2 = iv.h * iv.h;
    for (int row = 1; row < m - 1; ++row) {
        a(row, row - 1) = -1.0 / h2;
        a(row, row) = 2.0 / h2;
        a(row, row + 1) = -1.0 / h2;
        rhs(row) = prob.f[iv.l + row];
    }
    for (int k = 0; k < 3; ++k) a(m - 1, m - 3 + k) = wn[k];
    rhs(m - 1) = prob.g_b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw NumericalError("singular 1D coarse-grid system");
    const Eigen::VectorXd sol = lu.solve(rhs);
    std::vector<double> u(iv.n + 1, 0.0);
    for (int row = 0; row < m; ++row) u[iv.l + row] = sol(row);
    return u;
}

namespace {

struct Cycle1D {
    std::vector<Interval1D> levels;
    Config1D cfg;

    void run(std::vector<double>& u, const Problem1D& prob, std::size_t k) const {
        const Interval1D& fine = levels[k];
        const Interval1D& coarse = levels[k + 1];
        const Constants1D c = Constants1D::for_spacing(fine.h);
        for (int s = 0; s < cfg.nu1; ++s) relax_1d(u, prob, fine, c);

        const Defect1D d = defect_1d(u, prob, fine);
        Problem1D cp{restrict_1d(d.interior, fine, coarse), d.left, d.right};
        std::vector<double> e(coarse.n + 1, 0.0);
        if (k + 2 == levels.size()) {
            e = direct_solve_1d(cp, coarse);
        } else {
            const int gamma = cfg.kind == CycleKind::W ? 2 : 1;
            for (int g = 0; g < gamma; ++g) run(e, cp, k + 1);
        }
        const std::vector<double> ef = interpolate_1d(e);
        for (int j = fine.l; j <= fine.r; ++j) u[j] += ef[j];

        for (int s = 0; s < cfg.nu2; ++s) relax_1d(u, prob, fine, c);
    }
};

}  // namespace

SolveReport solve_1d(double a, double b, int n, int n_coarsest, const Config1D& cfg,
                     const std::vector<double>* u0) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.nu1 < 0 || cfg.nu2 < 0 || cfg.nu1 + cfg.nu2 == 0) {
        throw InvalidArgument("smoothing counts must be non-negative with nu1 + nu2 >= 1");
    }
    if (n_coarsest < 4 || n_coarsest >= n || n % n_coarsest != 0 ||
        ((n / n_coarsest) & (n / n_coarsest - 1)) != 0) {
        throw InvalidArgument("coarsest grid must be N / 2^k with 4 <= N_c < N");
    }
    if (cfg.kind == CycleKind::Tgcs && n_coarsest != n / 2) {
        throw InvalidArgument("the two-grid cycle needs N_c = N/2");
    }
    Cycle1D cyc;
    cyc.cfg = cfg;
    for (int m = n; m >= n_coarsest; m /= 2) cyc.levels.push_back(make_interval(a, b, m));
    const Interval1D& iv = cyc.levels.front();

    std::vector<double> u(n + 1, 0.0);
    if (u0 != nullptr) {
        if (static_cast<int>(u0->size()) != n + 1) throw InvalidArgument("u0 must have N+1 entries");
        for (int j = iv.l; j <= iv.r; ++j) u[j] = (*u0)[j];
    } else {
        for (int j = iv.l; j <= iv.r; ++j) u[j] = std::sin(40.0 * std::numbers::pi * iv.x(j));
    }
    const Problem1D prob{std::vector<double>(n + 1, 0.0), 0.0, 0.0};

    const double r0 = defect_1d(u, prob, iv).norm();
    SolveReport rep = measure_convergence(
        r0,
        [&] {
            cyc.run(u, prob, 0);
            return defect_1d(u, prob, iv).norm();
        },
        cfg.rho);
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace ghostmg
