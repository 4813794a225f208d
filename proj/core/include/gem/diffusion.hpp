#pragma once

#include <memory>

#include "gem/field.hpp"
#include "gem/meshless.hpp"

namespace gem::diffusion {

/// u = omega0 in the liquid and on the wall, u = 0 on the envelope.
ScalarField init_field(const NodeSet& nodes, double omega0);

/// Forward-Euler integrator for du/dt = lap(u) with u = 0 on envelope nodes
/// and a discrete zero normal derivative on wall nodes.
///
/// Each wall value is eliminated through its own row n.grad(u) = 0 after the
/// interior update. Neumann supports hold no other wall node, so the
/// elimination is explicit.
class DiffusionSolver {
  public:
    DiffusionSolver(const NodeSet& nodes, const meshless::WeightStore& weights, double c_stab = 0.2);
    ~DiffusionSolver();
    DiffusionSolver(DiffusionSolver&&) noexcept;
    DiffusionSolver& operator=(DiffusionSolver&&) noexcept;

    /// Largest admissible step, c_stab * h_min^2.
    [[nodiscard]] double stability_bound() const { return bound_; }

    [[nodiscard]] ScalarField step(const ScalarField& field, double dt) const;

    /// Overwrites wall values so that every wall row holds exactly.
    void enforce_neumann(std::vector<double>& values) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double bound_ = 0.0;
};

/// One step on a freshly built solver; convenience for tests and tools.
ScalarField step(const NodeSet& nodes, const meshless::WeightStore& weights, const ScalarField& field, double dt,
                 double c_stab = 0.2);

}  // namespace gem::diffusion
