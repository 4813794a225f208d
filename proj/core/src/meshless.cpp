#include "gem/meshless.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gem/errors.hpp"
#include "gem/spatial_index.hpp"

namespace gem {

void require_aligned(const ScalarField& field, const NodeSet& nodes, const char* where)
{
    if (field.size() != nodes.size() || field.generation != nodes.generation)
        throw AlignmentError(std::string(where) + ": field is not aligned with the node set");
}

}  // namespace gem

namespace gem::meshless {

Stencils::Stencils(int support_size, std::vector<int> flat, std::uint64_t generation)
    : n_(support_size), flat_(std::move(flat)), generation_(generation)
{
}

namespace {

double index_cell_size(const NodeSet& nodes)
{
    double h = nodes.spacing.empty() ? 0.0 : nodes.min_spacing();
    if (h > 0.0) return h;
    Vec2 lo = nodes.positions[0], hi = nodes.positions[0];
    for (const auto& p : nodes.positions) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double extent = std::max((hi - lo).maxCoeff(), 1e-12);
    return extent / std::sqrt(static_cast<double>(nodes.size()));
}

}  // namespace

Stencils find_stencils(const NodeSet& nodes, int n)
{
    if (n <= 0) throw SizeError("find_stencils: support size must be positive");
    if (nodes.size() < static_cast<std::size_t>(n))
        throw SizeError("find_stencils: " + std::to_string(nodes.size()) + " nodes cannot host stencils of size " +
                        std::to_string(n));
    const GridIndex index(nodes.positions, index_cell_size(nodes));
    std::vector<int> flat;
    flat.reserve(nodes.size() * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto nn = index.k_nearest(nodes.positions[i], n);
        // Self first even under exact coincidence with a lower-index node.
        auto self = std::find(nn.begin(), nn.end(), static_cast<int>(i));
        if (self == nn.end()) {
            nn.back() = static_cast<int>(i);
            self = nn.end() - 1;
        }
        std::rotate(nn.begin(), self, self + 1);
        flat.insert(flat.end(), nn.begin(), nn.end());
    }
    return {n, std::move(flat), nodes.generation};
}

std::array<double, kBasisSize> monomials(const Vec2& p)
{
    const double x = p.x(), y = p.y();
    return {1.0, x, y, x * x, x * y, y * y};
}

std::array<double, kBasisSize> operator_on_basis(const Operator& op)
{
    return std::visit(
        [](const auto& o) -> std::array<double, kBasisSize> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, Laplacian>) return {0, 0, 0, 2, 0, 2};
            if constexpr (std::is_same_v<T, Ddx>) return {0, 1, 0, 0, 0, 0};
            if constexpr (std::is_same_v<T, Ddy>) return {0, 0, 1, 0, 0, 0};
            if constexpr (std::is_same_v<T, NormalDerivative>) return {0, o.normal.x(), o.normal.y(), 0, 0, 0};
        },
        op);
}

int operator_order(const Operator& op) { return std::holds_alternative<Laplacian>(op) ? 2 : 1; }

double stencil_radius(const NodeSet& nodes, std::span<const int> support, std::size_t center)
{
    double r = 0.0;
    const Vec2& c = nodes.positions[center];
    for (int j : support) r = std::max(r, (nodes.positions[static_cast<std::size_t>(j)] - c).norm());
    return r;
}

namespace {

using BasisT = Eigen::Matrix<double, Eigen::Dynamic, kBasisSize>;  // n x m, the transposed system matrix

// Householder QR of the transposed moment matrix; solving R^T z = b and
// lifting w = Q z yields the minimum-norm weights of A w = b.
class LocalSystem {
  public:
    LocalSystem(const NodeSet& nodes, std::span<const int> support, std::size_t center, const WeightOptions& options)
        : radius_(stencil_radius(nodes, support, center)),
          sqrt_phi_(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(support.size()))),
          qr_(static_cast<Eigen::Index>(support.size()), kBasisSize)
    {
        const auto n = static_cast<Eigen::Index>(support.size());
        if (n < kBasisSize || !(radius_ > 0.0))
            throw ConditioningError("compute_weights: stencil of node " + std::to_string(center) +
                                    " cannot determine a quadratic basis");
        BasisT at(n, kBasisSize);
        const Vec2& c = nodes.positions[center];
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vec2 local = (nodes.positions[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] - c) / radius_;
            if (options.shape > 0.0) sqrt_phi_(i) = std::exp(-0.5 * local.squaredNorm() / (options.shape * options.shape));
            const auto m = monomials(local);
            for (int j = 0; j < kBasisSize; ++j) at(i, j) = sqrt_phi_(i) * m[static_cast<std::size_t>(j)];
        }
        qr_.compute(at);
        const auto diag = qr_.matrixQR().diagonal().cwiseAbs();
        if (diag.minCoeff() <= 1e-10 * diag.maxCoeff())
            throw ConditioningError("compute_weights: rank-deficient support geometry at node " +
                                    std::to_string(center));
    }

    [[nodiscard]] double radius() const { return radius_; }

    // Weights in physical units for rhs given in scaled coordinates.
    void solve(const std::array<double, kBasisSize>& rhs, int order, std::span<double> out) const
    {
        Eigen::Matrix<double, kBasisSize, 1> b;
        for (int j = 0; j < kBasisSize; ++j) b(j) = rhs[static_cast<std::size_t>(j)];
        const auto r = qr_.matrixQR().topLeftCorner(kBasisSize, kBasisSize).triangularView<Eigen::Upper>();
        const Eigen::Matrix<double, kBasisSize, 1> z = r.transpose().solve(b);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(qr_.rows());
        w.head(kBasisSize) = z;
        w.applyOnTheLeft(qr_.householderQ());
        const double scale = order == 2 ? radius_ * radius_ : radius_;
        for (Eigen::Index i = 0; i < w.size(); ++i) out[static_cast<std::size_t>(i)] = sqrt_phi_(i) * w(i) / scale;
    }

  private:
    double radius_;
    Eigen::VectorXd sqrt_phi_;
    Eigen::HouseholderQR<BasisT> qr_;
};

}  // namespace

std::vector<double> compute_weights(const NodeSet& nodes, std::span<const int> support, std::size_t center,
                                    const Operator& op, const WeightOptions& options)
{
    const LocalSystem sys(nodes, support, center, options);
    std::vector<double> w(support.size());
    sys.solve(operator_on_basis(op), operator_order(op), w);
    return w;
}

Stencils find_neumann_stencils(const NodeSet& nodes, int n, const Stencils& base)
{
    std::vector<int> ids;
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes.kinds[i] != NodeKind::wall) {
            ids.push_back(static_cast<int>(i));
            pts.push_back(nodes.positions[i]);
        }
    const auto count = static_cast<std::size_t>(n);
    std::vector<int> flat;
    flat.reserve(nodes.size() * count);
    const bool possible = ids.size() + 1 >= count;
    const GridIndex index(pts, index_cell_size(nodes));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.kinds[i] != NodeKind::wall) {
            const auto s = base.support(i);
            flat.insert(flat.end(), s.begin(), s.end());
            continue;
        }
        if (!possible)
            throw SizeError("find_neumann_stencils: too few non-wall nodes for a support of " + std::to_string(n));
        flat.push_back(static_cast<int>(i));
        for (int k : index.k_nearest(nodes.positions[i], n - 1)) flat.push_back(ids[static_cast<std::size_t>(k)]);
    }
    return {n, std::move(flat), nodes.generation};
}

WeightStore::WeightStore(const NodeSet& nodes, Stencils stencils, const WeightOptions& options)
    : stencils_(std::move(stencils))
{
    if (stencils_.generation() != nodes.generation || stencils_.size() != nodes.size())
        throw AlignmentError("WeightStore: stencils were built for a different node set");
    const std::size_t n = static_cast<std::size_t>(stencils_.support_size());
    const std::size_t count = nodes.size();
    neumann_ = find_neumann_stencils(nodes, stencils_.support_size(), stencils_);
    for (auto& r : rows_) r.assign(count * n, 0.0);
    has_normal_.assign(count, 0);

    const auto lap = operator_on_basis(Laplacian{});
    const auto dx = operator_on_basis(Ddx{});
    const auto dy = operator_on_basis(Ddy{});
    for (std::size_t i = 0; i < count; ++i) {
        const auto support = stencils_.support(i);
        const LocalSystem sys(nodes, support, i, options);
        const auto slot = [&](OperatorKind k) {
            return std::span<double>(rows_[static_cast<std::size_t>(k)].data() + i * n, n);
        };
        sys.solve(lap, 2, slot(OperatorKind::laplacian));
        sys.solve(dx, 1, slot(OperatorKind::ddx));
        sys.solve(dy, 1, slot(OperatorKind::ddy));
        if (nodes.is_boundary(i)) {
            const LocalSystem nsys(nodes, neumann_.support(i), i, {options.normal_shape, options.normal_shape});
            nsys.solve(operator_on_basis(NormalDerivative{nodes.normals[i]}), 1, slot(OperatorKind::normal));
            has_normal_[i] = 1;
        }
    }
}

bool WeightStore::has(OperatorKind kind, std::size_t node) const
{
    return kind != OperatorKind::normal || has_normal_[node] != 0;
}

std::span<const double> WeightStore::row(OperatorKind kind, std::size_t node) const
{
    const std::size_t n = static_cast<std::size_t>(stencils_.support_size());
    return {rows_[static_cast<std::size_t>(kind)].data() + node * n, n};
}

WeightStore build_weights(const NodeSet& nodes, int support_size, const WeightOptions& options)
{
    return {nodes, find_stencils(nodes, support_size), options};
}

double apply_operator(const WeightStore& weights, std::span<const double> values, std::size_t node,
                      OperatorKind kind)
{
    if (values.size() != weights.size())
        throw AlignmentError("apply_operator: field length " + std::to_string(values.size()) +
                             " does not match weight store of " + std::to_string(weights.size()) + " nodes");
    if (!weights.has(kind, node))
        throw DomainError("apply_operator: node " + std::to_string(node) + " has no normal-derivative weights");
    const auto support = weights.support(kind, node);
    const auto w = weights.row(kind, node);
    double s = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) s += w[k] * values[static_cast<std::size_t>(support[k])];
    return s;
}

double apply_operator(const WeightStore& weights, const ScalarField& field, std::size_t node, OperatorKind kind)
{
    if (field.generation != weights.generation())
        throw AlignmentError("apply_operator: field belongs to a different node set generation");
    return apply_operator(weights, std::span<const double>(field.values), node, kind);
}

}  // namespace gem::meshless
