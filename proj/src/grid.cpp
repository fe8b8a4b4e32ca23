#include "ghostmg/grid.hpp"

namespace ghostmg {

std::string to_string(const NodeIndex& n) {
    return "(i=" + std::to_string(n.i) + ", j=" + std::to_string(n.j) + ")";
}

GridSpec::GridSpec(int n) : n_(n), h_(0.0) {
    if (n < 4 || n % 2 != 0) {
        throw InvalidArgument("grid size N must be even and >= 4, got " + std::to_string(n));
    }
    h_ = 2.0 / n;
}

GridSpec build_grid(int n) { return GridSpec(n); }

}  // namespace ghostmg
