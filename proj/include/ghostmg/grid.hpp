#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghostmg {

/// Raised for violated preconditions on user-supplied arguments.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an embedded domain cannot be represented on a grid
/// (touches the computational boundary, under-resolved features, ...).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for numerical failures: degenerate gradients, singular systems.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Grid node: i indexes y (rows), j indexes x (columns).
struct NodeIndex {
    int i = 0;
    int j = 0;
    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

std::string to_string(const NodeIndex& n);

/// Uniform vertex-centered grid on [-1,1]^2 with N subdivisions per axis.
class GridSpec {
public:
    /// Throws InvalidArgument unless n >= 4 and even.
    explicit GridSpec(int n);

    int n() const { return n_; }
    double h() const { return h_; }
    int nodes_per_axis() const { return n_ + 1; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1);
    }

    double x(int j) const { return -1.0 + j * h_; }
    double y(int i) const { return -1.0 + i * h_; }
    Point coords(NodeIndex n) const { return {x(n.j), y(n.i)}; }

    bool contains(int i, int j) const { return i >= 0 && j >= 0 && i <= n_ && j <= n_; }
    bool contains(NodeIndex n) const { return contains(n.i, n.j); }

    std::size_t flat(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) +
               static_cast<std::size_t>(j);
    }
    std::size_t flat(NodeIndex n) const { return flat(n.i, n.j); }
    NodeIndex node(std::size_t flat_index) const {
        const int stride = n_ + 1;
        return {static_cast<int>(flat_index / stride), static_cast<int>(flat_index % stride)};
    }

    /// Grid with half the subdivisions; its nodes are the even-indexed nodes of this one.
    GridSpec coarsened() const { return GridSpec(n_ / 2); }

    friend bool operator==(const GridSpec& a, const GridSpec& b) { return a.n_ == b.n_; }

private:
    int n_;
    double h_;
};

GridSpec build_grid(int n);

/// Scalar field over every node of the computational square.
class GridFunction {
public:
    explicit GridFunction(const GridSpec& spec, double fill = 0.0)
        : spec_(spec), values_(spec.node_count(), fill) {}

    const GridSpec& spec() const { return spec_; }

    double& operator()(int i, int j) { return values_[spec_.flat(i, j)]; }
    double operator()(int i, int j) const { return values_[spec_.flat(i, j)]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& at(NodeIndex n) { return values_[spec_.flat(n)]; }
    double at(NodeIndex n) const { return values_[spec_.flat(n)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    void fill(double v) { values_.assign(values_.size(), v); }

private:
    GridSpec spec_;
    std::vector<double> values_;
};

}  // namespace ghostmg
