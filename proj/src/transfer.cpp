#include "ghostmg/transfer.hpp"

#include <algorithm>
#include <cmath>

namespace ghostmg {

const char* to_string(RestrictionKind k) {
    switch (k) {
        case RestrictionKind::Full: return "full";
        case RestrictionKind::Half: return "half";
        case RestrictionKind::Quarter: return "quarter";
        case RestrictionKind::Injection: return "injection";
    }
    return "unknown";
}

namespace detail {

RestrictionStencil rectangle_stencil(int i0, int i1, int j0, int j1, RestrictionKind kind) {
    // 1D full weighting (1/4,1/2,1/4) on a length-3 side, (1/2,1/2) on a length-2 side
    auto weights_1d = [](int lo, int hi) {
        std::array<double, 3> w{0.0, 0.0, 0.0};
        if (hi - lo == 2) {
            w = {0.25, 0.5, 0.25};
        } else if (hi - lo == 1) {
            w[lo + 1] = 0.5;
            w[hi + 1] = 0.5;
        } else {
            w[lo + 1] = 1.0;
        }
        return w;
    };
    const auto wi = weights_1d(i0, i1);
    const auto wj = weights_1d(j0, j1);
    RestrictionStencil st;
    st.kind = kind;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) st.weights[a * 3 + b] = wi[a] * wj[b];
    }
    return st;
}

}  // namespace detail

ExtensionPlan build_extension_plan(const DiscreteDomain& domain, const ExtensionConfig& cfg) {
    if (!(cfg.courant > 0.0 && cfg.courant <= 1.0)) {
        throw InvalidArgument("extension courant number must lie in (0,1]");
    }
    const GridSpec& spec = domain.spec();
    const double band = cfg.band_h * spec.h();
    ExtensionPlan plan;
    plan.courant = cfg.courant;
    plan.sweeps = cfg.sweeps;
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t k = 0; k < spec.node_count(); ++k) {
        const double phi = domain.phi().values[k];
        if (domain.mask()[k] == NodeClass::Exterior && phi <= band) order.emplace_back(phi, k);
    }
    std::sort(order.begin(), order.end());

    std::vector<BcKind> kind(spec.node_count(), BcKind::Dirichlet);
    std::vector<Point> normal(spec.node_count(), Point{0.0, 0.0});
    for (const auto& g : domain.ghosts()) kind[spec.flat(g.node)] = g.bc_kind;
    for (const auto& [phi, k] : order) {
        const NodeIndex p = spec.node(k);
        const Point grad = level_set_gradient(domain.phi(), p);
        const double norm = std::hypot(grad.x, grad.y);
        Point b = spec.coords(p);
        if (norm >= 1e-12) {
            normal[k] = {grad.x / norm, grad.y / norm};
            b = {b.x - normal[k].x * phi, b.y - normal[k].y * phi};
        }
        kind[k] = domain.split()(b);
    }

    for (const auto& [phi, k] : order) {
        const NodeIndex p = spec.node(k);
        const Point nrm = normal[k];
        ExtensionPlan::Entry e{k, k, k, 0.0, 0.0, kind[k]};
        if (nrm.x != 0.0 || nrm.y != 0.0) {
            const NodeIndex qx{p.i, p.j - (nrm.x < 0.0 ? -1 : 1)};
            const NodeIndex qy{p.i - (nrm.y < 0.0 ? -1 : 1), p.j};
            if (spec.contains(qx)) {
                e.qx = spec.flat(qx);
                e.wx = std::abs(nrm.x);
            }
            if (spec.contains(qy)) {
                e.qy = spec.flat(qy);
                e.wy = std::abs(nrm.y);
            }
            const bool same_x = e.wx > 0.0 && kind[e.qx] == e.kind;
            const bool same_y = e.wy > 0.0 && kind[e.qy] == e.kind;
            if (same_x != same_y) {
                if (!same_x) e.wx = 0.0;
                if (!same_y) e.wy = 0.0;
            }
        }
        plan.entries.push_back(e);
    }
    return plan;
}

void extend_defect(DefectField& r, const ExtensionPlan& plan) {
    for (int sweep = 0; sweep < plan.sweeps; ++sweep) {
        for (const auto& e : plan.entries) {
            const double wsum = e.wx + e.wy;
            if (wsum == 0.0) continue;
            // upwind step of r_tau + n . grad r = 0 with dtau = courant * h / (|n_x|+|n_y|)
            const double flux = (r[e.node] - r[e.qx]) * e.wx + (r[e.node] - r[e.qy]) * e.wy;
            r[e.node] -= plan.courant * flux / wsum;
        }
    }
}

void extend_defect(DefectField& r, const DiscreteDomain& domain, const ExtensionConfig& cfg) {
    extend_defect(r, build_extension_plan(domain, cfg));
}

std::vector<SupportTag> extended_support(const DiscreteDomain& domain, const ExtensionPlan& plan) {
    const GridSpec& spec = domain.spec();
    std::vector<SupportTag> support(spec.node_count(), SupportTag::None);
    auto tag = [](BcKind k) { return k == BcKind::Dirichlet ? SupportTag::Dirichlet : SupportTag::Neumann; };
    for (std::size_t k : domain.unknowns()) {
        support[k] = domain.is_interior(k) ? SupportTag::Interior
                                           : tag(domain.ghosts()[domain.ghost_index(k)].bc_kind);
    }
    for (const auto& e : plan.entries) support[e.node] = tag(e.kind);
    return support;
}

GridFunction restrict_partial(const GridFunction& w, const std::vector<char>& in_set,
                              const GridFunction& base) {
    const GridSpec& fine = w.spec();
    const GridSpec& coarse = base.spec();
    if (coarse.n() * 2 != fine.n()) throw InvalidArgument("restriction needs a coarse grid of N/2");
    GridFunction out = base;
    for (int ci = 0; ci <= coarse.n(); ++ci) {
        for (int cj = 0; cj <= coarse.n(); ++cj) {
            const int fi = 2 * ci;
            const int fj = 2 * cj;
            if (!in_set[fine.flat(fi, fj)]) continue;
            const auto st = choose_restriction_stencil([&](int di, int dj) {
                return fine.contains(fi + di, fj + dj) && in_set[fine.flat(fi + di, fj + dj)] != 0;
            });
            double s = 0.0;
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const double wt = st.weights[(di + 1) * 3 + (dj + 1)];
                    if (wt != 0.0) s += wt * w(fi + di, fj + dj);
                }
            }
            out(ci, cj) = s;
        }
    }
    return out;
}

DefectField restrict_defect(const DefectField& r, const DiscreteDomain& fine,
                            const std::vector<SupportTag>& support, const DiscreteDomain& coarse,
                            bool split_kinds) {
    const GridSpec& fs = fine.spec();
    std::vector<char> interior(fs.node_count(), 0);
    std::vector<char> exterior(fs.node_count(), 0);
    std::vector<char> dirichlet(fs.node_count(), 0);
    std::vector<char> neumann(fs.node_count(), 0);
    for (std::size_t k = 0; k < fs.node_count(); ++k) {
        switch (support[k]) {
            case SupportTag::Interior: interior[k] = 1; break;
            case SupportTag::Dirichlet: exterior[k] = dirichlet[k] = 1; break;
            case SupportTag::Neumann: exterior[k] = neumann[k] = 1; break;
            case SupportTag::None: break;
        }
    }
    const GridFunction inner = restrict_partial(r, interior, GridFunction(coarse.spec()));
    DefectField out = restrict_partial(r, exterior, inner);
    const GridSpec& cs = coarse.spec();
    GridFunction by_kind[2] = {GridFunction(cs), GridFunction(cs)};
    if (split_kinds) {
        by_kind[0] = restrict_partial(r, dirichlet, inner);
        by_kind[1] = restrict_partial(r, neumann, inner);
    }
    for (std::size_t k = 0; k < cs.node_count(); ++k) {
        const NodeClass c = coarse.mask()[k];
        if (c == NodeClass::Exterior) {
            out[k] = 0.0;
        } else if (c == NodeClass::Ghost) {
            const NodeIndex n = cs.node(k);
            const SupportTag t = support[fs.flat(2 * n.i, 2 * n.j)];
            if (t == SupportTag::None) {
                throw GeometryError("coarse ghost " + to_string(n) +
                                    " received no defect (extension band does not reach it)");
            }
            const BcKind kind = coarse.ghosts()[coarse.ghost_index(k)].bc_kind;
            const SupportTag want = kind == BcKind::Dirichlet ? SupportTag::Dirichlet : SupportTag::Neumann;
            if (split_kinds && t == want) out[k] = by_kind[kind == BcKind::Dirichlet ? 0 : 1][k];
        }
    }
    return out;
}

GridFunction prolongate(const GridFunction& coarse) {
    const GridSpec fine = GridSpec(coarse.spec().n() * 2);
    GridFunction out(fine);
    const int n = fine.n();
    for (int i = 0; i <= n; i += 2) {
        for (int j = 0; j <= n; j += 2) out(i, j) = coarse(i / 2, j / 2);
    }
    for (int i = 0; i <= n; i += 2) {
        for (int j = 1; j < n; j += 2) out(i, j) = 0.5 * (out(i, j - 1) + out(i, j + 1));
    }
    for (int i = 1; i < n; i += 2) {
        for (int j = 0; j <= n; ++j) out(i, j) = 0.5 * (out(i - 1, j) + out(i + 1, j));
    }
    return out;
}

}  // namespace ghostmg
