#pragma once

#include <functional>
#include <vector>

#include "ghostmg/grid.hpp"

namespace ghostmg {

using LevelSetFormula = std::function<double(double x, double y)>;

/// Node samples of a level-set function; negative inside the domain.
struct LevelSetField {
    GridFunction values;
    bool is_signed_distance = false;

    const GridSpec& spec() const { return values.spec(); }
    double operator()(int i, int j) const { return values(i, j); }
    double at(NodeIndex n) const { return values.at(n); }
};

enum class NodeClass : unsigned char { Interior, Ghost, Exterior };

class NodeClassMask {
public:
    NodeClassMask(const GridSpec& spec, std::vector<NodeClass> tags);

    const GridSpec& spec() const { return spec_; }
    NodeClass operator()(int i, int j) const { return tags_[spec_.flat(i, j)]; }
    NodeClass at(NodeIndex n) const { return tags_[spec_.flat(n)]; }
    NodeClass operator[](std::size_t k) const { return tags_[k]; }

    bool is_unknown(int i, int j) const {
        return spec_.contains(i, j) && (*this)(i, j) != NodeClass::Exterior;
    }
    bool is_unknown(NodeIndex n) const { return is_unknown(n.i, n.j); }

    std::size_t count(NodeClass c) const;

private:
    GridSpec spec_;
    std::vector<NodeClass> tags_;
};

enum class BcKind : unsigned char { Dirichlet, Neumann };

/// Chooses the boundary condition type from the boundary projection point.
using BoundarySplit = std::function<BcKind(const Point&)>;

enum class StencilExtent : unsigned char { Full3x3, Reduced2x2, Reduced3point };

const char* to_string(StencilExtent e);

struct StencilMember {
    NodeIndex node;
    int k1 = 0;  ///< step count along s_x
    int k2 = 0;  ///< step count along s_y
};

/// Upwind interpolation stencil anchored at a ghost node.
struct StencilSpec {
    NodeIndex origin;
    int sx = 1;
    int sy = 1;
    StencilExtent extent = StencilExtent::Full3x3;
    std::vector<StencilMember> members;
};

struct GhostMeta {
    NodeIndex node;
    Point projection;  ///< closest boundary point B
    Point normal;      ///< unit normal at the ghost node
    BcKind bc_kind = BcKind::Dirichlet;
    StencilSpec stencil;
};

/// Samples `formula` at every node. Throws GeometryError on non-finite samples.
LevelSetField sample_level_set(const GridSpec& spec, const LevelSetFormula& formula);

struct ReinitStats {
    int steps = 0;
    double last_update = 0.0;  ///< max |update| inside the band at the final step
};

/// Drives `field` towards a signed distance function by pseudo-time iteration of
///   phi_t = sgn(phi0) (1 - |grad phi|)
/// with sgn(phi0) ~ phi0 / sqrt(phi0^2 + h^2), a Godunov upwind Hamiltonian on
/// ENO2 differences and second-order TVD Runge-Kutta steps of h/2. Nodes next
/// to the zero level set relax towards a subcell distance estimate, which keeps
/// every node's sign. Stops when the largest update over |phi| <= band_width
/// drops below 1e-3 h or after max_steps.
LevelSetField reinitialize(const LevelSetField& field, double band_width, int max_steps = 100,
                           ReinitStats* stats = nullptr);

/// Interior iff phi < 0; ghost iff phi >= 0 with an interior axis neighbour
/// (edge nodes of the square may be ghosts). Throws GeometryError if an
/// interior node lies on the edge of the square.
NodeClassMask classify_nodes(const LevelSetField& field);

/// Central-difference gradient of phi at a node, second-order one-sided at grid edges.
Point level_set_gradient(const LevelSetField& field, NodeIndex n);

/// B = G - grad(phi)/|grad(phi)| * phi(G). Throws NumericalError on vanishing gradient.
Point closest_boundary_point(NodeIndex ghost, const LevelSetField& field);

/// Nine-point stencil in the direction of B, reduced to 2x2 or 3 points when
/// nodes fall outside Interior u Ghost. The 3-point stencil is G with its two
/// upwind axis neighbours, or failing that G with the closest pair of upwind
/// members spanning a plane. A zero component of B - G may point either way:
/// +1 is used unless that side admits no stencil at all. Throws GeometryError
/// when no such triple exists.
StencilSpec upwind_stencil(NodeIndex ghost, const Point& projection, const NodeClassMask& mask);

/// Builds metadata for every ghost node in lexicographic order.
std::vector<GhostMeta> build_ghosts(const LevelSetField& field, const NodeClassMask& mask,
                                    const BoundarySplit& split);

/// Coarse level set obtained by injection (coarse nodes are the even fine nodes).
LevelSetField inject_level_set(const LevelSetField& fine);

}  // namespace ghostmg
