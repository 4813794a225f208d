#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "gem/field.hpp"
#include "gem/node_set.hpp"

namespace gem::meshless {

/// Support nodes of every node: the n nearest nodes, the node itself first,
/// then by increasing distance with ties broken by ascending index.
class Stencils {
  public:
    Stencils() = default;
    Stencils(int support_size, std::vector<int> flat, std::uint64_t generation);

    [[nodiscard]] int support_size() const { return n_; }
    [[nodiscard]] std::size_t size() const { return n_ > 0 ? flat_.size() / static_cast<std::size_t>(n_) : 0; }
    [[nodiscard]] std::span<const int> support(std::size_t node) const
    {
        return {flat_.data() + node * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    [[nodiscard]] std::uint64_t generation() const { return generation_; }

  private:
    int n_ = 0;
    std::vector<int> flat_;
    std::uint64_t generation_ = 0;
};

Stencils find_stencils(const NodeSet& nodes, int n);

/// Supports for the normal-derivative rows: a wall node gets itself and its
/// n - 1 nearest non-wall nodes, so each wall value follows from interior
/// values alone; every other node keeps its find_stencils support.
Stencils find_neumann_stencils(const NodeSet& nodes, int n, const Stencils& base);

struct Laplacian {};
struct Ddx {};
struct Ddy {};
struct NormalDerivative {
    Vec2 normal;
};
using Operator = std::variant<Laplacian, Ddx, Ddy, NormalDerivative>;

/// Quadratic monomial basis {1, x, y, x^2, xy, y^2} in coordinates shifted to
/// the stencil center and divided by the stencil radius.
inline constexpr int kBasisSize = 6;
std::array<double, kBasisSize> monomials(const Vec2& local);

/// Operator applied to each basis monomial at the stencil center, in the
/// scaled coordinates (physical value = scaled value / radius^order).
std::array<double, kBasisSize> operator_on_basis(const Operator& op);
int operator_order(const Operator& op);

/// Distance from the center to the farthest support node.
double stencil_radius(const NodeSet& nodes, std::span<const int> support, std::size_t center);

/// Weighting of the minimum-norm solve: minimizes sum w_k^2 / phi_k with
/// phi_k = exp(-(r_k / (shape * R))^2), R the stencil radius. shape <= 0
/// gives the plain minimum-norm solution, whose Laplacian leans on the
/// outermost support nodes and has growing modes under explicit stepping.
struct WeightOptions {
    double shape = 0.5;
    /// Shape used for the normal-derivative rows of boundary nodes.
    double normal_shape = 0.5;
};

/// Minimum-norm solution of the 6 x n moment system for one stencil.
/// Throws ConditioningError on rank-deficient geometry.
std::vector<double> compute_weights(const NodeSet& nodes, std::span<const int> support, std::size_t center,
                                    const Operator& op, const WeightOptions& options = {});

enum class OperatorKind : std::uint8_t { laplacian = 0, ddx = 1, ddy = 2, normal = 3 };

/// Laplacian and gradient weights for every node, plus normal-derivative
/// weights for boundary nodes, all aligned with the node's stencil.
class WeightStore {
  public:
    WeightStore() = default;
    WeightStore(const NodeSet& nodes, Stencils stencils, const WeightOptions& options = {});

    [[nodiscard]] const Stencils& stencils() const { return stencils_; }
    /// Support the row of `kind` at `node` is aligned with.
    [[nodiscard]] std::span<const int> support(OperatorKind kind, std::size_t node) const
    {
        return kind == OperatorKind::normal ? neumann_.support(node) : stencils_.support(node);
    }
    [[nodiscard]] std::uint64_t generation() const { return stencils_.generation(); }
    [[nodiscard]] std::size_t size() const { return stencils_.size(); }
    [[nodiscard]] bool has(OperatorKind kind, std::size_t node) const;
    [[nodiscard]] std::span<const double> row(OperatorKind kind, std::size_t node) const;

  private:
    Stencils stencils_;
    Stencils neumann_;
    std::array<std::vector<double>, 4> rows_;
    std::vector<std::uint8_t> has_normal_;
};

WeightStore build_weights(const NodeSet& nodes, int support_size, const WeightOptions& options = {});

/// Weighted stencil sum, the operator approximation at `node`.
double apply_operator(const WeightStore& weights, std::span<const double> values, std::size_t node,
                      OperatorKind kind = OperatorKind::laplacian);
double apply_operator(const WeightStore& weights, const ScalarField& field, std::size_t node,
                      OperatorKind kind = OperatorKind::laplacian);

}  // namespace gem::meshless
