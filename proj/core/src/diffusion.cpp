#include "gem/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gem/errors.hpp"

namespace gem::diffusion {

ScalarField init_field(const NodeSet& nodes, double omega0)
{
    ScalarField u(nodes, omega0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes.kinds[i] == NodeKind::envelope) u[i] = 0.0;
    return u;
}

struct DiffusionSolver::Impl {
    std::uint64_t generation = 0;
    std::size_t count = 0;
    int n = 0;
    std::vector<NodeKind> kinds;
    std::vector<int> support;      // flattened stencils
    std::vector<double> laplace;   // flattened Laplacian rows
    std::vector<int> wall;         // wall node ids
    std::vector<int> neumann;      // Neumann supports of wall nodes, self first
    std::vector<double> elim;      // -w_k / w_self for k >= 1, in `wall` order
};

DiffusionSolver::DiffusionSolver(const NodeSet& nodes, const meshless::WeightStore& weights, double c_stab)
    : impl_(std::make_unique<Impl>())
{
    if (weights.generation() != nodes.generation || weights.size() != nodes.size())
        throw AlignmentError("DiffusionSolver: weights were built for a different node set");
    auto& m = *impl_;
    m.generation = nodes.generation;
    m.count = nodes.size();
    m.n = weights.stencils().support_size();
    m.kinds = nodes.kinds;
    const auto n = static_cast<std::size_t>(m.n);
    m.support.resize(m.count * n);
    m.laplace.resize(m.count * n);
    for (std::size_t i = 0; i < m.count; ++i) {
        const auto s = weights.stencils().support(i);
        const auto w = weights.row(meshless::OperatorKind::laplacian, i);
        std::copy(s.begin(), s.end(), m.support.begin() + static_cast<std::ptrdiff_t>(i * n));
        std::copy(w.begin(), w.end(), m.laplace.begin() + static_cast<std::ptrdiff_t>(i * n));
        if (nodes.kinds[i] != NodeKind::wall) continue;
        m.wall.push_back(static_cast<int>(i));
        const auto ns = weights.support(meshless::OperatorKind::normal, i);
        const auto nw = weights.row(meshless::OperatorKind::normal, i);
        double scale = 0.0;
        for (double x : nw) scale = std::max(scale, std::abs(x));
        if (std::abs(nw[0]) <= 1e-8 * scale)
            throw ConditioningError("DiffusionSolver: vanishing self weight in the Neumann row of node " +
                                    std::to_string(i));
        m.neumann.insert(m.neumann.end(), ns.begin(), ns.end());
        m.elim.push_back(0.0);
        for (std::size_t k = 1; k < n; ++k) m.elim.push_back(-nw[k] / nw[0]);
    }

    const double h_min = nodes.min_spacing();
    bound_ = c_stab * h_min * h_min;
}

DiffusionSolver::~DiffusionSolver() = default;
DiffusionSolver::DiffusionSolver(DiffusionSolver&&) noexcept = default;
DiffusionSolver& DiffusionSolver::operator=(DiffusionSolver&&) noexcept = default;

void DiffusionSolver::enforce_neumann(std::vector<double>& values) const
{
    const auto& m = *impl_;
    const auto n = static_cast<std::size_t>(m.n);
    for (std::size_t r = 0; r < m.wall.size(); ++r) {
        const int* s = m.neumann.data() + r * n;
        const double* e = m.elim.data() + r * n;
        double acc = 0.0;
        for (std::size_t k = 1; k < n; ++k) acc += e[k] * values[static_cast<std::size_t>(s[k])];
        values[static_cast<std::size_t>(m.wall[r])] = acc;
    }
}

ScalarField DiffusionSolver::step(const ScalarField& field, double dt) const
{
    const auto& m = *impl_;
    if (field.generation != m.generation || field.size() != m.count)
        throw AlignmentError("DiffusionSolver::step: field is not aligned with the node set");
    if (!(dt > 0.0)) throw DomainError("DiffusionSolver::step: time step must be positive");
    if (dt > bound_)
        throw StabilityError("DiffusionSolver::step: dt = " + std::to_string(dt) + " exceeds the stability bound " +
                             std::to_string(bound_));
    const auto n = static_cast<std::size_t>(m.n);
    std::vector<double> prev = field.values;
    for (std::size_t i = 0; i < m.count; ++i)
        if (m.kinds[i] == NodeKind::envelope) prev[i] = 0.0;

    std::vector<double> next(m.count, 0.0);
    for (std::size_t i = 0; i < m.count; ++i) {
        if (m.kinds[i] != NodeKind::interior) continue;
        const int* s = m.support.data() + i * n;
        const double* w = m.laplace.data() + i * n;
        double lap = 0.0;
        for (std::size_t k = 0; k < n; ++k) lap += w[k] * prev[static_cast<std::size_t>(s[k])];
        next[i] = prev[i] + dt * lap;
    }
    enforce_neumann(next);
    return {std::move(next), m.generation};
}

ScalarField step(const NodeSet& nodes, const meshless::WeightStore& weights, const ScalarField& field, double dt,
                 double c_stab)
{
    return DiffusionSolver(nodes, weights, c_stab).step(field, dt);
}

}  // namespace gem::diffusion
