#pragma once

#include <array>
#include <vector>

#include "ghostmg/discretization.hpp"

namespace ghostmg {

/// Transport of ghost defects into the exterior band, constant along normals.
struct ExtensionConfig {
    double band_h = 3.0;  ///< band width in units of h
    int sweeps = 6;       ///< Gauss-Seidel passes in order of increasing phi
    /// Local pseudo-time step as a fraction of the upwind CFL limit
    /// h/(|n_x|+|n_y|); 1 solves each node's upwind equation exactly.
    double courant = 1.0;
};

/// Exterior band nodes sorted by distance with their upwind neighbours. A
/// neighbour whose closest boundary point carries the other condition type is
/// dropped unless no neighbour of the node's own type is available.
struct ExtensionPlan {
    struct Entry {
        std::size_t node;
        std::size_t qx, qy;
        double wx, wy;  ///< |n_x|, |n_y| (zero when the neighbour is unavailable)
        BcKind kind;    ///< condition at the node's closest boundary point
    };
    std::vector<Entry> entries;
    double courant = 1.0;
    int sweeps = 6;
};

ExtensionPlan build_extension_plan(const DiscreteDomain& domain, const ExtensionConfig& cfg);

/// Fills exterior non-ghost band nodes of r; ghost and interior values are untouched.
void extend_defect(DefectField& r, const ExtensionPlan& plan);
void extend_defect(DefectField& r, const DiscreteDomain& domain, const ExtensionConfig& cfg);

/// Role of a node's defect after extension. Ghost and band nodes are tagged
/// with the condition at their closest boundary point.
enum class SupportTag : unsigned char { None, Interior, Dirichlet, Neumann };

std::vector<SupportTag> extended_support(const DiscreteDomain& domain, const ExtensionPlan& plan);

enum class RestrictionKind { Full, Half, Quarter, Injection };

const char* to_string(RestrictionKind k);

/// Weights over the 3x3 fine neighbourhood of a coarse node; index (di+1)*3 + (dj+1).
struct RestrictionStencil {
    RestrictionKind kind = RestrictionKind::Injection;
    std::array<double, 9> weights{};
};

/// Largest full rectangle of the neighbourhood containing the centre whose
/// nodes all satisfy `member(di, dj)`; the centre itself must be a member.
template <class Member>
RestrictionStencil choose_restriction_stencil(const Member& member);

/// Transfers w to the coarse grid using only fine nodes with in_set != 0.
/// Coarse nodes outside the set keep the value stored in base.
GridFunction restrict_partial(const GridFunction& w, const std::vector<char>& in_set,
                              const GridFunction& base);

/// Interior defect and exterior (boundary) defect restricted separately:
/// pass one over interior nodes with zero base, pass two over the remaining
/// supported nodes. With split_kinds, a coarse ghost only averages exterior
/// defects of its own condition type (falling back to all of them when its
/// fine node carries the other type). Exterior non-ghost coarse entries are
/// zeroed. Throws GeometryError if a coarse ghost receives no value.
DefectField restrict_defect(const DefectField& r, const DiscreteDomain& fine,
                            const std::vector<SupportTag>& support, const DiscreteDomain& coarse,
                            bool split_kinds = true);

/// Bilinear interpolation from the coarse grid onto the whole fine rectangle.
GridFunction prolongate(const GridFunction& coarse);

// ---------------------------------------------------------------------------

namespace detail {
RestrictionStencil rectangle_stencil(int i0, int i1, int j0, int j1, RestrictionKind kind);
}

template <class Member>
RestrictionStencil choose_restriction_stencil(const Member& member) {
    auto admissible = [&](int i0, int i1, int j0, int j1) {
        for (int di = i0; di <= i1; ++di) {
            for (int dj = j0; dj <= j1; ++dj) {
                if (!member(di, dj)) return false;
            }
        }
        return true;
    };
    if (admissible(-1, 1, -1, 1)) return detail::rectangle_stencil(-1, 1, -1, 1, RestrictionKind::Full);
    constexpr std::array<std::array<int, 4>, 4> halves{{
        {-1, 1, -1, 0}, {-1, 1, 0, 1}, {-1, 0, -1, 1}, {0, 1, -1, 1}}};
    for (const auto& r : halves) {
        if (admissible(r[0], r[1], r[2], r[3])) return detail::rectangle_stencil(r[0], r[1], r[2], r[3], RestrictionKind::Half);
    }
    constexpr std::array<std::array<int, 4>, 4> quarters{{
        {-1, 0, -1, 0}, {-1, 0, 0, 1}, {0, 1, -1, 0}, {0, 1, 0, 1}}};
    for (const auto& r : quarters) {
        if (admissible(r[0], r[1], r[2], r[3])) return detail::rectangle_stencil(r[0], r[1], r[2], r[3], RestrictionKind::Quarter);
    }
    return detail::rectangle_stencil(0, 0, 0, 0, RestrictionKind::Injection);
}

}  // namespace ghostmg
