#include "plb/mesh.hpp"

#include "plb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace plb {

std::shared_ptr<const Mesh1D> Mesh1D::create(int num_interior, double length,
                                             Grading grading, double gamma) {
    if (num_interior < 3)
        throw InvalidSpec("mesh: require at least 3 interior nodes");
    if (!(length > 0.0))
        throw InvalidSpec("mesh: require positive length");
    if (!(gamma >= 1.0))
        throw InvalidSpec("mesh: grading exponent must be >= 1");

    auto m = std::shared_ptr<Mesh1D>(new Mesh1D());
    m->n_ = num_interior;
    m->length_ = length;
    m->grading_ = grading;
    m->gamma_ = grading == Grading::uniform ? 1.0 : gamma;

    const int np = num_interior + 1;
    m->nodes_.resize(static_cast<size_t>(num_interior) + 2);
    m->nodes_.front() = 0.0;
    m->nodes_.back() = length;
    // Fill the left half and mirror, so symmetry about L/2 is exact in
    // floating point.
    for (int i = 1; 2 * i <= np; ++i) {
        const double tau = static_cast<double>(i) / np;
        double x;
        if (m->gamma_ == 1.0)
            x = length * tau;
        else
            x = length * 0.5 * std::pow(2.0 * tau, m->gamma_);
        m->nodes_[static_cast<size_t>(i)] = x;
        m->nodes_[static_cast<size_t>(np - i)] = length - x;
    }

    for (size_t i = 0; i + 1 < m->nodes_.size(); ++i)
        if (!(m->nodes_[i] < m->nodes_[i + 1]))
            throw InvalidSpec("mesh: nodes not strictly increasing");

    m->h_if_.resize(static_cast<size_t>(np));
    m->inv_h_if_.resize(static_cast<size_t>(np));
    for (int j = 0; j < np; ++j) {
        m->h_if_[static_cast<size_t>(j)] =
            m->nodes_[static_cast<size_t>(j) + 1] - m->nodes_[static_cast<size_t>(j)];
        m->inv_h_if_[static_cast<size_t>(j)] = 1.0 / m->h_if_[static_cast<size_t>(j)];
    }
    m->h_c_.resize(static_cast<size_t>(num_interior));
    m->inv_h_c_.resize(static_cast<size_t>(num_interior));
    for (int i = 1; i <= num_interior; ++i) {
        m->h_c_[static_cast<size_t>(i - 1)] =
            0.5 * (m->nodes_[static_cast<size_t>(i) + 1] -
                   m->nodes_[static_cast<size_t>(i) - 1]);
        m->inv_h_c_[static_cast<size_t>(i - 1)] = 1.0 / m->h_c_[static_cast<size_t>(i - 1)];
    }
    return m;
}

std::shared_ptr<const Mesh1D> Mesh1D::for_spec(const ProblemSpec& spec,
                                               int num_interior) {
    const Grading g = spec.delta >= 1.0 ? Grading::graded : Grading::uniform;
    return create(num_interior, spec.domain_length, g, 2.0);
}

GridFunction::GridFunction(std::shared_ptr<const Mesh1D> m, std::vector<double> values)
    : mesh(std::move(m)), v(std::move(values)) {
    if (static_cast<int>(v.size()) != mesh->n())
        throw InvalidSpec("grid function: value count does not match the mesh");
}

double GridFunction::sup_norm() const noexcept { return kern::max_val(v); }

double GridFunction::l2_norm() const noexcept {
    return std::sqrt(kern::dot_w(v, v, mesh->h_c()));
}

double GridFunction::argmax_x() const noexcept {
    const auto it = std::max_element(v.begin(), v.end());
    const auto idx = static_cast<int>(it - v.begin());
    return mesh->node(idx + 1);
}

bool GridFunction::interior_positive() const noexcept {
    return kern::min_val(v) > 0.0;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    if (a.mesh.get() != b.mesh.get() && a.n() != b.n())
        throw InvalidSpec("sup_distance: meshes do not match");
    double out = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i)
        out = std::max(out, std::fabs(a.v[i] - b.v[i]));
    return out;
}

} // namespace plb
