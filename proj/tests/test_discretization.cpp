/// @file test_discretization.cpp
/// @brief Five-point Laplacian, stencil interpolants, boundary operators,
/// defects, assembly and the direct solver.

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_support.hpp"

using namespace ghostmg;
using namespace ghostmg::testing;

namespace {

NodeClassMask all_interior(const GridSpec& spec) {
    return NodeClassMask(spec, std::vector<NodeClass>(spec.node_count(), NodeClass::Interior));
}

template <class F>
GridFunction sample(const GridSpec& spec, F f) {
    GridFunction u(spec);
    for (int i = 0; i <= spec.n(); ++i) {
        for (int j = 0; j <= spec.n(); ++j) u(i, j) = f(spec.x(j), spec.y(i));
    }
    return u;
}

/// Points inside and up to h around the stencil's bounding square.
std::vector<Point> probe_points(const StencilSpec& st, const GridSpec& spec) {
    const Point o = spec.coords(st.origin);
    const double h = spec.h();
    std::vector<Point> pts;
    for (double a : {-0.9, -0.3, 0.0, 0.45, 1.0, 1.7, 2.0, 2.8}) {
        for (double b : {-0.7, 0.0, 0.5, 1.2, 2.0, 2.9}) {
            pts.push_back({o.x + st.sx * a * h, o.y + st.sy * b * h});
        }
    }
    return pts;
}

double ghost_scale(const DiscreteDomain& d, const ProblemData& p) {
    double s = std::max(1.0, max_abs(p.g));
    for (std::size_t k : d.unknowns()) s = std::max(s, std::abs(p.f[k]));
    return s;
}

/// A v scattered back onto the unknown nodes.
GridFunction apply_matrix(const LinearSystem& sys, const GridFunction& v, const DiscreteDomain& d) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(d.unknowns().size()));
    for (std::size_t r = 0; r < d.unknowns().size(); ++r) x(static_cast<Eigen::Index>(r)) = v[d.unknowns()[r]];
    const Eigen::VectorXd y = sys.matrix * x;
    GridFunction out(d.spec());
    for (std::size_t r = 0; r < d.unknowns().size(); ++r) out[d.unknowns()[r]] = y(static_cast<Eigen::Index>(r));
    return out;
}

double interior_error(const GridFunction& u, const DiscreteDomain& d) {
    double e = 0.0;
    for (std::size_t k : d.unknowns()) {
        if (d.is_interior(k)) e = std::max(e, std::abs(u[k] - manufactured_u(d.spec().coords(d.spec().node(k)))));
    }
    return e;
}

}  // namespace

TEST_CASE("five-point Laplacian") {
    const DiscreteDomain d = circle_domain(64);
    const GridSpec& spec = d.spec();

    const GridFunction quad = sample(spec, [](double x, double y) { return x * x + y * y; });
    const GridFunction lap = apply_laplacian(quad, d.mask());
    const GridFunction one = apply_laplacian(GridFunction(spec, 3.0), d.mask());
    for (std::size_t k = 0; k < spec.node_count(); ++k) {
        if (d.is_interior(k)) {
            CHECK(lap[k] == doctest::Approx(4.0).epsilon(1e-9));
            CHECK(std::abs(one[k]) < 1e-9);
        } else {
            CHECK(lap[k] == 0.0);
        }
    }

    // truncation error of sin(pi x) sin(pi y) decays by four per halving of h
    auto truncation = [](int n) {
        const DiscreteDomain dn = circle_domain(n);
        const double pi = std::numbers::pi;
        const GridFunction u =
            sample(dn.spec(), [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
        const GridFunction l = apply_laplacian(u, dn.mask());
        double e = 0.0;
        for (std::size_t k : dn.unknowns()) {
            if (dn.is_interior(k)) e = std::max(e, std::abs(l[k] + 2.0 * pi * pi * u[k]));
        }
        return e;
    };
    const double ratio = truncation(32) / truncation(64);
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);

    std::vector<NodeClass> tags(GridSpec(8).node_count(), NodeClass::Exterior);
    tags[GridSpec(8).flat(4, 4)] = NodeClass::Interior;
    CHECK_THROWS_AS(apply_laplacian(GridFunction(GridSpec(8)), NodeClassMask(GridSpec(8), tags)),
                    NumericalError);
}

TEST_CASE("stencil interpolants reproduce their polynomial spaces") {
    const GridSpec spec(16);
    const NodeIndex g{8, 8};
    const Point b{spec.x(8) + 0.4 * spec.h(), spec.y(8) - 0.7 * spec.h()};
    const StencilSpec full = upwind_stencil(g, b, all_interior(spec));
    REQUIRE(full.extent == StencilExtent::Full3x3);
    std::vector<NodeClass> tags(spec.node_count(), NodeClass::Interior);
    tags[spec.flat(6, 10)] = NodeClass::Exterior;
    const StencilSpec bilinear = upwind_stencil(g, b, NodeClassMask(spec, tags));
    REQUIRE(bilinear.extent == StencilExtent::Reduced2x2);
    tags[spec.flat(7, 9)] = NodeClass::Exterior;
    const StencilSpec plane = upwind_stencil(g, b, NodeClassMask(spec, tags));
    REQUIRE(plane.extent == StencilExtent::Reduced3point);

    auto reproduces = [&](const StencilSpec& st, int max_degree) {
        for (int a = 0; a <= max_degree; ++a) {
            for (int c = 0; c <= max_degree; ++c) {
                auto q = [&](double x, double y) { return std::pow(x, a) * std::pow(y, c); };
                const GridFunction u = sample(spec, q);
                for (const Point& p : probe_points(st, spec)) {
                    CAPTURE(a);
                    CAPTURE(c);
                    CHECK(biquadratic_eval(u, st, p) == doctest::Approx(q(p.x, p.y)).epsilon(1e-12).scale(1.0));
                    const Point grad = biquadratic_grad(u, st, p);
                    const double qx = a == 0 ? 0.0 : a * std::pow(p.x, a - 1) * std::pow(p.y, c);
                    const double qy = c == 0 ? 0.0 : c * std::pow(p.x, a) * std::pow(p.y, c - 1);
                    CHECK(grad.x == doctest::Approx(qx).epsilon(1e-10).scale(1.0));
                    CHECK(grad.y == doctest::Approx(qy).epsilon(1e-10).scale(1.0));
                }
            }
        }
    };
    reproduces(full, 2);
    reproduces(bilinear, 1);

    const GridFunction lin = sample(spec, [](double x, double y) { return 1.5 - 2.0 * x + 0.25 * y; });
    for (const Point& p : probe_points(plane, spec)) {
        CHECK(biquadratic_eval(lin, plane, p) == doctest::Approx(1.5 - 2.0 * p.x + 0.25 * p.y).epsilon(1e-12));
        const Point grad = biquadratic_grad(lin, plane, p);
        CHECK(grad.x == doctest::Approx(-2.0).epsilon(1e-10));
        CHECK(grad.y == doctest::Approx(0.25).epsilon(1e-10));
    }

    SUBCASE("worked polynomials") {
        const GridFunction q = sample(spec, [](double x, double y) { return (1.0 + x) * (2.0 - y) + x * x; });
        const GridFunction r = sample(spec, [](double x, double y) { return 3.0 * x - 2.0 * y + x * y; });
        for (const Point& p : probe_points(full, spec)) {
            CHECK(biquadratic_eval(q, full, p) ==
                  doctest::Approx((1.0 + p.x) * (2.0 - p.y) + p.x * p.x).epsilon(1e-12));
            const Point gr = biquadratic_grad(r, full, p);
            CHECK(gr.x == doctest::Approx(3.0 + p.y).epsilon(1e-11));
            CHECK(gr.y == doctest::Approx(-2.0 + p.x).epsilon(1e-11));
            const Point gc = biquadratic_grad(GridFunction(spec, 4.0), full, p);
            CHECK(std::abs(gc.x) < 1e-10);
            CHECK(std::abs(gc.y) < 1e-10);
            CHECK(biquadratic_eval(GridFunction(spec, 1.0), full, p) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    SUBCASE("cardinality at stencil nodes") {
        const GridFunction u = random_field(spec, 7u);
        for (const auto& m : full.members) {
            CHECK(biquadratic_eval(u, full, spec.coords(m.node)) == doctest::Approx(u.at(m.node)).epsilon(1e-13));
        }
    }
    SUBCASE("gradient agrees with finite differences") {
        const GridFunction u = random_field(spec, 11u);
        const double eps = 1e-6;
        for (const Point& p : probe_points(full, spec)) {
            for (const Point& dir : {Point{1.0, 0.0}, Point{0.0, 1.0}, Point{0.6, -0.8}}) {
                const double fd = (biquadratic_eval(u, full, {p.x + eps * dir.x, p.y + eps * dir.y}) -
                                   biquadratic_eval(u, full, {p.x - eps * dir.x, p.y - eps * dir.y})) /
                                  (2.0 * eps);
                const Point grad = biquadratic_grad(u, full, p);
                const double an = grad.x * dir.x + grad.y * dir.y;
                CHECK(fd == doctest::Approx(an).epsilon(1e-6).scale(std::max(1.0, std::abs(an))));
            }
        }
    }
}

TEST_CASE("boundary operators on a half-plane") {
    const GridSpec spec(8);
    const LevelSetField phi = sample_level_set(spec, [](double x, double) { return x - 0.5; });
    const GridFunction u = sample(spec, [](double x, double) { return x; });
    GhostMeta g;
    g.node = {4, 7};
    g.projection = closest_boundary_point(g.node, phi);
    g.normal = {1.0, 0.0};
    g.stencil = upwind_stencil(g.node, g.projection, all_interior(spec));
    g.bc_kind = BcKind::Dirichlet;
    CHECK(bc_apply(u, g, phi) == doctest::Approx(0.5).epsilon(1e-14));
    g.bc_kind = BcKind::Neumann;
    CHECK(bc_apply(u, g, phi) == doctest::Approx(1.0).epsilon(1e-13));

    const LevelSetField flat = sample_level_set(spec, [](double, double) { return 0.3; });
    CHECK_THROWS_AS(bc_apply(u, g, flat), NumericalError);
}

TEST_CASE("Neumann operator approximates the normal derivative to second order") {
    // u = x^2 - y^2 is harmonic; compare with the analytic normal derivative at B
    auto worst = [](int n) {
        const DiscreteDomain d = circle_domain(n, all_neumann);
        const GridFunction u = sample(d.spec(), [](double x, double y) { return x * x - y * y; });
        double e = 0.0;
        for (const auto& g : d.ghosts()) {
            const Point& b = g.projection;
            const double len = std::hypot(b.x - kCircleCx, b.y - kCircleCy);
            const double exact = (2.0 * b.x * (b.x - kCircleCx) - 2.0 * b.y * (b.y - kCircleCy)) / len;
            e = std::max(e, std::abs(bc_apply(u, g, d.phi()) - exact));
        }
        return e;
    };
    const double e32 = worst(32);
    const double e64 = worst(64);
    const double e128 = worst(128);
    CHECK(e128 < e64);
    CHECK(e64 < e32);
    const double order = std::log2(e32 / e128) / 2.0;
    CHECK(order > 1.7);
}

TEST_CASE("defect formulas") {
    const DiscreteDomain d = circle_domain(32);
    const GridSpec& spec = d.spec();

    const ProblemData zero = zero_problem(d);
    const DefectField r0 = compute_defect(GridFunction(spec), zero, d);
    for (std::size_t k = 0; k < r0.size(); ++k) CHECK(r0[k] == 0.0);

    ProblemData prob = zero_problem(d);
    prob.f = random_field(spec, 3u);
    for (std::size_t k = 0; k < prob.g.size(); ++k) prob.g[k] = 0.5 + static_cast<double>(k);
    const DefectField r = compute_defect(GridFunction(spec), prob, d);
    for (std::size_t k = 0; k < spec.node_count(); ++k) {
        if (d.is_interior(k)) {
            CHECK(r[k] == prob.f[k]);
        } else if (d.is_ghost(k)) {
            CHECK(r[k] == prob.g[static_cast<std::size_t>(d.ghost_index(k))]);
        } else {
            CHECK(r[k] == 0.0);
        }
    }

    const ProblemData mp = manufactured_problem(d);
    const GridFunction u = DirectSolver(d).solve(mp, d);
    CHECK(defect_norm(compute_defect(u, mp, d), d) <= 1e-10 * ghost_scale(d, mp));
}

TEST_CASE("assembled rows") {
    const DiscreteDomain d = circle_domain(32);
    const LinearSystem sys = assemble_system(zero_problem(d), d);
    const GridFunction one(d.spec(), 1.0);
    const GridFunction ones = apply_matrix(sys, one, d);
    const double h = d.spec().h();
    for (std::size_t k : d.unknowns()) {
        const SparseRow row = system_row(k, d);
        if (d.is_interior(k)) {
            CHECK(row.cols.size() <= 5);
            CHECK(row.weight_of(k) == doctest::Approx(4.0 / (h * h)));
            CHECK(std::abs(ones[k]) < 1e-9);
        } else {
            CHECK(row.cols.size() <= 9);
            const auto kind = d.ghosts()[static_cast<std::size_t>(d.ghost_index(k))].bc_kind;
            if (kind == BcKind::Dirichlet) {
                CHECK(ones[k] == doctest::Approx(1.0).epsilon(1e-12));
            } else {
                CHECK(std::abs(ones[k]) < 1e-10 / h);
            }
        }
    }
}

TEST_CASE("defect is affine in u and matches the assembled residual") {
    const DiscreteDomain d = circle_domain(16);
    const GridSpec& spec = d.spec();
    ProblemData prob = zero_problem(d);
    prob.f = random_field(spec, 5u);
    for (std::size_t k = 0; k < prob.g.size(); ++k) prob.g[k] = std::cos(static_cast<double>(k));
    const LinearSystem sys = assemble_system(prob, d);

    const GridFunction u = random_field(spec, 21u);
    const GridFunction v = random_field(spec, 22u);
    GridFunction uv(spec);
    for (std::size_t k = 0; k < uv.size(); ++k) uv[k] = u[k] + v[k];
    const DefectField ru = compute_defect(u, prob, d);
    const DefectField ruv = compute_defect(uv, prob, d);
    const GridFunction av = apply_matrix(sys, v, d);
    const GridFunction au = apply_matrix(sys, u, d);
    const double scale = 1.0 / (spec.h() * spec.h());
    for (std::size_t r = 0; r < d.unknowns().size(); ++r) {
        const std::size_t k = d.unknowns()[r];
        CHECK(std::abs(ruv[k] - (ru[k] - av[k])) <= 1e-12 * scale);
        CHECK(std::abs(ru[k] - (sys.rhs(static_cast<Eigen::Index>(r)) - au[k])) <= 1e-12 * scale);
    }
}

TEST_CASE("direct solver") {
    SUBCASE("second-order accuracy on a manufactured solution") {
        // on N=32 two Neumann ghosts fall back to bilinear stencils, so the
        // asymptotic rate is measured from N=64 on
        std::vector<double> err;
        for (int n : {64, 128, 256}) {
            const DiscreteDomain d = circle_domain(n);
            err.push_back(interior_error(DirectSolver(d).solve(manufactured_problem(d), d), d));
        }
        for (std::size_t k = 0; k + 1 < err.size(); ++k) {
            const double order = std::log2(err[k] / err[k + 1]);
            MESSAGE("observed order " << order);
            CHECK(order >= 1.7);
            CHECK(order <= 2.3);
        }
    }
    SUBCASE("empty system") {
        const LevelSetField tiny = sample_level_set(
            GridSpec(8), [](double x, double y) { return std::hypot(x - 0.1, y - 0.1) - 0.01; });
        const DiscreteDomain d(tiny, left_dirichlet_split);
        CHECK_THROWS_AS(DirectSolver{d}, NumericalError);
    }
}
