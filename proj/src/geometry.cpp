#include "ghostmg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ghostmg {

namespace {

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

// Upwind one-sided ENO2 differences (backward, forward) of f along one axis.
// `at(k)` returns the sample at offset k from the current node; `lo`/`hi`
// tell how many neighbours exist on each side.
template <class At>
void eno2_differences(const At& at, int lo, int hi, double h, double& backward, double& forward) {
    const double c = at(0);
    const double l = lo >= 1 ? at(-1) : 2.0 * c - at(1);
    const double r = hi >= 1 ? at(1) : 2.0 * c - at(-1);
    const double d2c = l - 2.0 * c + r;
    const double d2l = lo >= 2 ? at(-2) - 2.0 * l + c : d2c;
    const double d2r = hi >= 2 ? c - 2.0 * r + at(2) : d2c;
    const bool edge = lo < 1 || hi < 1;
    // a missing side carries no upwind information
    backward = lo < 1 ? 0.0 : (c - l + (edge ? 0.0 : 0.5 * minmod(d2c, d2l))) / h;
    forward = hi < 1 ? 0.0 : (r - c - (edge ? 0.0 : 0.5 * minmod(d2c, d2r))) / h;
}

double godunov_axis_squared(double backward, double forward, double sign) {
    if (sign > 0.0) {
        const double a = std::max(backward, 0.0);
        const double b = std::min(forward, 0.0);
        return std::max(a * a, b * b);
    }
    const double a = std::min(backward, 0.0);
    const double b = std::max(forward, 0.0);
    return std::max(a * a, b * b);
}

}  // namespace

NodeClassMask::NodeClassMask(const GridSpec& spec, std::vector<NodeClass> tags)
    : spec_(spec), tags_(std::move(tags)) {
    if (tags_.size() != spec_.node_count()) {
        throw InvalidArgument("node class mask size does not match grid");
    }
}

std::size_t NodeClassMask::count(NodeClass c) const {
    return static_cast<std::size_t>(std::count(tags_.begin(), tags_.end(), c));
}

const char* to_string(StencilExtent e) {
    switch (e) {
        case StencilExtent::Full3x3: return "full3x3";
        case StencilExtent::Reduced2x2: return "reduced2x2";
        case StencilExtent::Reduced3point: return "reduced3point";
    }
    return "unknown";
}

LevelSetField sample_level_set(const GridSpec& spec, const LevelSetFormula& formula) {
    GridFunction values(spec);
    for (int i = 0; i <= spec.n(); ++i) {
        for (int j = 0; j <= spec.n(); ++j) {
            const double v = formula(spec.x(j), spec.y(i));
            if (!std::isfinite(v)) {
                throw GeometryError("non-finite level-set sample at node " + to_string(NodeIndex{i, j}) +
                                    " (x=" + std::to_string(spec.x(j)) +
                                    ", y=" + std::to_string(spec.y(i)) + ")");
            }
            values(i, j) = v;
        }
    }
    return LevelSetField{std::move(values), false};
}

LevelSetField reinitialize(const LevelSetField& field, double band_width, int max_steps,
                           ReinitStats* stats) {
    const GridSpec& spec = field.spec();
    const int n = spec.n();
    const double h = spec.h();
    if (band_width < 3.0 * h - 1e-12) {
        throw InvalidArgument("reinitialization band must be at least 3h");
    }
    const GridFunction& phi0 = field.values;
    for (std::size_t k = 0; k < phi0.size(); ++k) {
        if (!std::isfinite(phi0[k])) {
            throw GeometryError("non-finite level-set value at node " + to_string(spec.node(k)));
        }
    }

    // Subcell fix: nodes next to a sign change relax towards an interface
    // distance estimate taken from the initial data.
    std::vector<char> interface_node(spec.node_count(), 0);
    std::vector<double> subcell_distance(spec.node_count(), 0.0);
    constexpr double eps = 1e-14;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double c = phi0(i, j);
            bool crosses = c == 0.0;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4 && !crosses; ++k) {
                const int ii = i + di[k];
                const int jj = j + dj[k];
                if (spec.contains(ii, jj) && phi0(ii, jj) * c <= 0.0) crosses = true;
            }
            if (!crosses) continue;
            const std::size_t idx = spec.flat(i, j);
            interface_node[idx] = 1;
            if (c == 0.0) continue;
            auto axis_variation = [&](int di1, int dj1) {
                double v = eps;
                const bool has_p = spec.contains(i + di1, j + dj1);
                const bool has_m = spec.contains(i - di1, j - dj1);
                const double p = has_p ? phi0(i + di1, j + dj1) : 0.0;
                const double m = has_m ? phi0(i - di1, j - dj1) : 0.0;
                if (has_p && has_m) v = std::max(v, std::abs(p - m) / 2.0);
                if (has_p) v = std::max(v, std::abs(p - c));
                if (has_m) v = std::max(v, std::abs(c - m));
                return v;
            };
            const double vx = axis_variation(0, 1);
            const double vy = axis_variation(1, 0);
            subcell_distance[idx] = h * c / std::sqrt(vx * vx + vy * vy);
        }
    }

    // rate of change of phi at every node
    auto rate = [&](const GridFunction& phi, GridFunction& out) {
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                const std::size_t idx = spec.flat(i, j);
                const double c0 = phi0[idx];
                const double c = phi[idx];
                if (interface_node[idx]) {
                    const double s = c0 > 0.0 ? 1.0 : (c0 < 0.0 ? -1.0 : 0.0);
                    out[idx] = -(s * std::abs(c) - subcell_distance[idx]) / h;
                    continue;
                }
                const double s = c0 / std::sqrt(c0 * c0 + h * h);
                double bx, fx, by, fy;
                eno2_differences([&](int k) { return phi(i, j + k); }, std::min(j, 2),
                                 std::min(n - j, 2), h, bx, fx);
                eno2_differences([&](int k) { return phi(i + k, j); }, std::min(i, 2),
                                 std::min(n - i, 2), h, by, fy);
                const double grad = std::sqrt(godunov_axis_squared(bx, fx, s) +
                                              godunov_axis_squared(by, fy, s));
                out[idx] = -s * (grad - 1.0);
            }
        }
    };

    // TVD Runge-Kutta of order two
    GridFunction phi = phi0;
    GridFunction stage(spec);
    GridFunction k1(spec);
    GridFunction k2(spec);
    const double dtau = 0.5 * h;
    const double tolerance = 1e-3 * h;
    ReinitStats local;
    for (int step = 0; step < max_steps; ++step) {
        rate(phi, k1);
        for (std::size_t k = 0; k < phi.size(); ++k) stage[k] = phi[k] + dtau * k1[k];
        rate(stage, k2);
        double max_update = 0.0;
        for (std::size_t k = 0; k < phi.size(); ++k) {
            const double update = 0.5 * dtau * (k1[k] + k2[k]);
            if (std::abs(phi[k]) <= band_width) max_update = std::max(max_update, std::abs(update));
            phi[k] += update;
        }
        local.steps = step + 1;
        local.last_update = max_update;
        if (max_update < tolerance) break;
    }
    if (stats) *stats = local;
    return LevelSetField{std::move(phi), true};
}

NodeClassMask classify_nodes(const LevelSetField& field) {
    const GridSpec& spec = field.spec();
    const int n = spec.n();
    std::vector<NodeClass> tags(spec.node_count(), NodeClass::Exterior);
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double v = field(i, j);
            if (!std::isfinite(v)) {
                throw GeometryError("non-finite level-set value at node " + to_string(NodeIndex{i, j}));
            }
            if (v < 0.0) {
                if (i == 0 || j == 0 || i == n || j == n) {
                    throw GeometryError("domain touches the computational boundary at node " +
                                        to_string(NodeIndex{i, j}));
                }
                tags[spec.flat(i, j)] = NodeClass::Interior;
            }
        }
    }
    auto interior_at = [&](int i, int j) {
        return spec.contains(i, j) && tags[spec.flat(i, j)] == NodeClass::Interior;
    };
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const std::size_t k = spec.flat(i, j);
            if (tags[k] == NodeClass::Interior) continue;
            if (interior_at(i + 1, j) || interior_at(i - 1, j) || interior_at(i, j + 1) ||
                interior_at(i, j - 1)) {
                tags[k] = NodeClass::Ghost;
            }
        }
    }
    return NodeClassMask(spec, std::move(tags));
}

Point level_set_gradient(const LevelSetField& field, NodeIndex g) {
    const GridSpec& spec = field.spec();
    const double h = spec.h();
    const int n = spec.n();
    auto derivative = [&](int di, int dj, int pos) {
        // pos: index of the node along the differentiation axis
        if (pos > 0 && pos < n) {
            return (field(g.i + di, g.j + dj) - field(g.i - di, g.j - dj)) / (2.0 * h);
        }
        if (pos == 0) {
            return (-3.0 * field(g.i, g.j) + 4.0 * field(g.i + di, g.j + dj) -
                    field(g.i + 2 * di, g.j + 2 * dj)) /
                   (2.0 * h);
        }
        return (3.0 * field(g.i, g.j) - 4.0 * field(g.i - di, g.j - dj) +
                field(g.i - 2 * di, g.j - 2 * dj)) /
               (2.0 * h);
    };
    return {derivative(0, 1, g.j), derivative(1, 0, g.i)};
}

Point closest_boundary_point(NodeIndex ghost, const LevelSetField& field) {
    const GridSpec& spec = field.spec();
    const Point grad = level_set_gradient(field, ghost);
    const double norm = std::hypot(grad.x, grad.y);
    if (norm < 1e-12) {
        throw NumericalError("degenerate level-set gradient at ghost " + to_string(ghost));
    }
    const Point g = spec.coords(ghost);
    const double phi = field.at(ghost);
    return {g.x - grad.x / norm * phi, g.y - grad.y / norm * phi};
}

StencilSpec upwind_stencil(NodeIndex ghost, const Point& projection, const NodeClassMask& mask) {
    const GridSpec& spec = mask.spec();
    const Point g = spec.coords(ghost);
    const double dx = projection.x - g.x;
    const double dy = projection.y - g.y;
    // a zero component points either way; +1 is used unless it admits no stencil
    std::vector<std::pair<int, int>> orientations{{dx < 0.0 ? -1 : 1, dy < 0.0 ? -1 : 1}};
    if (dx == 0.0) orientations.push_back({-1, orientations[0].second});
    if (dy == 0.0) {
        const std::size_t count = orientations.size();
        for (std::size_t k = 0; k < count; ++k) orientations.push_back({orientations[k].first, -1});
    }

    auto member = [&](int sx, int sy, int k1, int k2) {
        return StencilMember{{ghost.i + sy * k2, ghost.j + sx * k1}, k1, k2};
    };
    auto try_extent = [&](int sx, int sy, StencilExtent extent,
                          std::initializer_list<std::pair<int, int>> offsets) -> std::optional<StencilSpec> {
        StencilSpec st{ghost, sx, sy, extent, {}};
        for (auto [k1, k2] : offsets) {
            StencilMember m = member(sx, sy, k1, k2);
            if (!mask.is_unknown(m.node)) return std::nullopt;
            st.members.push_back(m);
        }
        return st;
    };
    // any plane through G and two upwind members, closest pair first
    auto try_plane = [&](int sx, int sy) -> std::optional<StencilSpec> {
        std::vector<StencilMember> valid;
        for (int k2 = 0; k2 <= 2; ++k2) {
            for (int k1 = 0; k1 <= 2; ++k1) {
                if (k1 + k2 == 0) continue;
                const StencilMember m = member(sx, sy, k1, k2);
                if (mask.is_unknown(m.node)) valid.push_back(m);
            }
        }
        int best = -1;
        std::pair<std::size_t, std::size_t> pick{0, 0};
        for (std::size_t a = 0; a < valid.size(); ++a) {
            for (std::size_t b = a + 1; b < valid.size(); ++b) {
                const auto& ma = valid[a];
                const auto& mb = valid[b];
                if (ma.k1 * mb.k2 - ma.k2 * mb.k1 == 0) continue;
                const int reach = ma.k1 + ma.k2 + mb.k1 + mb.k2;
                if (best < 0 || reach < best) {
                    best = reach;
                    pick = {a, b};
                }
            }
        }
        if (best < 0) return std::nullopt;
        return StencilSpec{ghost, sx, sy, StencilExtent::Reduced3point,
                           {member(sx, sy, 0, 0), valid[pick.first], valid[pick.second]}};
    };

    for (auto [sx, sy] : orientations) {
        if (auto st = try_extent(sx, sy, StencilExtent::Full3x3,
                                 {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}})) {
            return *st;
        }
        if (auto st = try_extent(sx, sy, StencilExtent::Reduced2x2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}})) return *st;
        if (auto st = try_extent(sx, sy, StencilExtent::Reduced3point, {{0, 0}, {1, 0}, {0, 1}})) return *st;
        if (auto st = try_plane(sx, sy)) return *st;
    }
    throw GeometryError("under-resolved geometry: no admissible boundary stencil at ghost " +
                        to_string(ghost));
}

std::vector<GhostMeta> build_ghosts(const LevelSetField& field, const NodeClassMask& mask,
                                    const BoundarySplit& split) {
    const GridSpec& spec = field.spec();
    std::vector<GhostMeta> ghosts;
    for (int j = 0; j <= spec.n(); ++j) {
        for (int i = 0; i <= spec.n(); ++i) {
            if (mask(i, j) != NodeClass::Ghost) continue;
            const NodeIndex g{i, j};
            GhostMeta meta;
            meta.node = g;
            const Point grad = level_set_gradient(field, g);
            const double norm = std::hypot(grad.x, grad.y);
            if (norm < 1e-12) {
                throw NumericalError("degenerate level-set gradient at ghost " + to_string(g));
            }
            meta.normal = {grad.x / norm, grad.y / norm};
            meta.projection = closest_boundary_point(g, field);
            meta.bc_kind = split(meta.projection);
            meta.stencil = upwind_stencil(g, meta.projection, mask);
            ghosts.push_back(std::move(meta));
        }
    }
    return ghosts;
}

LevelSetField inject_level_set(const LevelSetField& fine) {
    const GridSpec coarse = fine.spec().coarsened();
    GridFunction values(coarse);
    for (int i = 0; i <= coarse.n(); ++i) {
        for (int j = 0; j <= coarse.n(); ++j) values(i, j) = fine(2 * i, 2 * j);
    }
    return LevelSetField{std::move(values), fine.is_signed_distance};
}

}  // namespace ghostmg
