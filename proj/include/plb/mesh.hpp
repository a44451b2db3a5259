#pragma once

#include "plb/errors.hpp"
#include "plb/problem.hpp"

#include <memory>
#include <span>
#include <vector>

namespace plb {

enum class Grading { uniform, graded };

/// 1D mesh on (0, L): N interior nodes plus the two boundary nodes.
/// Graded meshes push a uniform parameter through the symmetric power map
/// s -> 0.5 (2s)^gamma (mirrored about 1/2), clustering nodes at both ends.
class Mesh1D {
public:
    static std::shared_ptr<const Mesh1D> create(int num_interior, double length,
                                                Grading grading, double gamma);

    /// Default mesh for a spec: boundary-graded (gamma = 2) when delta >= 1,
    /// uniform otherwise.
    static std::shared_ptr<const Mesh1D> for_spec(const ProblemSpec& spec,
                                                  int num_interior);

    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    Grading grading() const noexcept { return grading_; }
    double gamma() const noexcept { return gamma_; }

    /// All N+2 nodes including both boundaries.
    std::span<const double> nodes() const noexcept { return nodes_; }
    /// Interface widths h_{j+1/2} = x_{j+1} - x_j, j = 0..N.
    std::span<const double> h_if() const noexcept { return h_if_; }
    std::span<const double> inv_h_if() const noexcept { return inv_h_if_; }
    /// Centered widths (x_{i+1} - x_{i-1})/2 around interior node i = 1..N.
    std::span<const double> h_c() const noexcept { return h_c_; }
    std::span<const double> inv_h_c() const noexcept { return inv_h_c_; }

    double node(int i) const noexcept { return nodes_[static_cast<size_t>(i)]; }

private:
    Mesh1D() = default;
    int n_ = 0;
    double length_ = 1.0;
    Grading grading_ = Grading::uniform;
    double gamma_ = 1.0;
    std::vector<double> nodes_, h_if_, inv_h_if_, h_c_, inv_h_c_;
};

/// Nodal values at the interior nodes of a mesh; boundary values are fixed 0.
struct GridFunction {
    std::shared_ptr<const Mesh1D> mesh;
    std::vector<double> v;

    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const Mesh1D> m, double fill = 0.0)
        : mesh(std::move(m)), v(static_cast<size_t>(mesh->n()), fill) {}
    GridFunction(std::shared_ptr<const Mesh1D> m, std::vector<double> values);

    int n() const noexcept { return static_cast<int>(v.size()); }
    double sup_norm() const noexcept;      // max of values
    double l2_norm() const noexcept;       // sqrt(sum u_i^2 h_c_i)
    double argmax_x() const noexcept;      // node location of the maximum
    bool interior_positive() const noexcept;
};

/// sup |a - b| over interior nodes; meshes must match.
double sup_distance(const GridFunction& a, const GridFunction& b);

} // namespace plb
