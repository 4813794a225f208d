#include "gem/pu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "gem/errors.hpp"

namespace gem::meshless {

double wendland(double r, double radius)
{
    if (r >= radius) return 0.0;
    const double q = r / radius;
    const double a = 1.0 - q;
    return a * a * a * a * (4.0 * q + 1.0);
}

namespace detail {

struct PUGeometry {
    std::uint64_t generation = 0;
    std::size_t n = 0;
    std::vector<Vec2> centers;
    std::vector<double> radii;     // patch radius R_i
    std::vector<double> scales;    // local coordinate scale (stencil radius)
    std::vector<int> support;      // flattened stencils
    std::vector<double> pinv;      // kBasisSize x n per patch, row-major
    double max_radius = 0.0;
    double extension_factor = 2.0;
    std::unique_ptr<GridIndex> index;
};

}  // namespace detail

namespace {

std::string describe(const Vec2& p)
{
    std::ostringstream os;
    os.precision(6);
    os << "(" << p.x() << ", " << p.y() << ")";
    return os.str();
}

}  // namespace

PUApproximator::PUApproximator(const NodeSet& nodes, const Stencils& stencils, PUOptions options)
{
    if (stencils.generation() != nodes.generation || stencils.size() != nodes.size())
        throw AlignmentError("PUApproximator: stencils were built for a different node set");
    auto geo = std::make_shared<detail::PUGeometry>();
    const std::size_t count = nodes.size();
    const std::size_t n = static_cast<std::size_t>(stencils.support_size());
    geo->generation = nodes.generation;
    geo->n = n;
    geo->centers = nodes.positions;
    geo->radii.resize(count);
    geo->scales.resize(count);
    geo->support.resize(count * n);
    geo->pinv.resize(count * n * kBasisSize);
    geo->extension_factor = options.extension_factor;

    for (std::size_t i = 0; i < count; ++i) {
        const auto sup = stencils.support(i);
        std::copy(sup.begin(), sup.end(), geo->support.begin() + static_cast<std::ptrdiff_t>(i * n));
        const double s = stencil_radius(nodes, sup, i);
        if (!(s > 0.0)) throw ConditioningError("PUApproximator: degenerate stencil at node " + std::to_string(i));
        geo->scales[i] = s;
        const double h = (i < nodes.spacing.size() && nodes.spacing[i] > 0.0) ? nodes.spacing[i] : 0.5 * s;
        geo->radii[i] = options.radius_factor * h;
        geo->max_radius = std::max(geo->max_radius, geo->radii[i]);

        Eigen::MatrixXd b(static_cast<Eigen::Index>(n), kBasisSize);
        for (std::size_t k = 0; k < n; ++k) {
            const auto m = monomials((nodes.positions[static_cast<std::size_t>(sup[k])] - nodes.positions[i]) / s);
            for (int j = 0; j < kBasisSize; ++j) b(static_cast<Eigen::Index>(k), j) = m[static_cast<std::size_t>(j)];
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
        const auto diag = qr.matrixQR().diagonal().cwiseAbs();
        if (diag.minCoeff() <= 1e-10 * diag.maxCoeff())
            throw ConditioningError("PUApproximator: rank-deficient local fit at node " + std::to_string(i));
        const Eigen::MatrixXd p = qr.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        double* dst = geo->pinv.data() + i * n * kBasisSize;
        for (int j = 0; j < kBasisSize; ++j)
            for (std::size_t k = 0; k < n; ++k) dst[static_cast<std::size_t>(j) * n + k] = p(j, static_cast<Eigen::Index>(k));
    }
    geo->index = std::make_unique<GridIndex>(std::span<const Vec2>(geo->centers), std::max(geo->max_radius, 1e-12));
    geo_ = std::move(geo);
}

PUInterpolant PUApproximator::fit(std::span<const double> values) const
{
    const auto& g = *geo_;
    if (values.size() != g.centers.size())
        throw AlignmentError("PUApproximator::fit: value count does not match the node set");
    std::vector<double> coeffs(g.centers.size() * kBasisSize, 0.0);
    for (std::size_t i = 0; i < g.centers.size(); ++i) {
        const double* p = g.pinv.data() + i * g.n * kBasisSize;
        const int* sup = g.support.data() + i * g.n;
        for (int j = 0; j < kBasisSize; ++j) {
            double c = 0.0;
            for (std::size_t k = 0; k < g.n; ++k) c += p[static_cast<std::size_t>(j) * g.n + k] * values[static_cast<std::size_t>(sup[k])];
            coeffs[i * kBasisSize + static_cast<std::size_t>(j)] = c;
        }
    }
    return {geo_, std::move(coeffs)};
}

PUInterpolant PUApproximator::fit(const ScalarField& field) const
{
    if (field.generation != geo_->generation)
        throw AlignmentError("PUApproximator::fit: field belongs to a different node set generation");
    return fit(std::span<const double>(field.values));
}

PUInterpolant PUApproximator::fit_corrected(std::span<const double> values) const
{
    const auto first = fit(values);
    std::vector<double> target(values.begin(), values.end());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] += values[i] - first(geo_->centers[i]);
    return fit(target);
}

PUInterpolant PUApproximator::fit_corrected(const ScalarField& field) const
{
    if (field.generation != geo_->generation)
        throw AlignmentError("PUApproximator::fit_corrected: field belongs to a different node set generation");
    return fit_corrected(std::span<const double>(field.values));
}

void PUApproximator::verify_coverage(std::span<const Vec2> samples) const
{
    const PUInterpolant probe(geo_, std::vector<double>(geo_->centers.size() * kBasisSize, 0.0));
    for (const auto& s : samples)
        if (!probe.covers(s)) throw CoverageError("PU cover has a gap at " + describe(s));
}

double PUInterpolant::local_value(std::size_t patch, const Vec2& p) const
{
    const auto& g = *geo_;
    const auto m = monomials((p - g.centers[patch]) / g.scales[patch]);
    double v = 0.0;
    for (int j = 0; j < kBasisSize; ++j) v += coeffs_[patch * kBasisSize + static_cast<std::size_t>(j)] * m[static_cast<std::size_t>(j)];
    return v;
}

std::uint64_t PUInterpolant::generation() const { return geo_->generation; }

bool PUInterpolant::covers(const Vec2& p) const
{
    bool hit = false;
    geo_->index->for_each_within(p, geo_->max_radius, [&](int id, double d2) {
        if (d2 < geo_->radii[static_cast<std::size_t>(id)] * geo_->radii[static_cast<std::size_t>(id)]) hit = true;
    });
    return hit;
}

std::vector<std::pair<int, double>> PUInterpolant::blend_weights(const Vec2& p) const
{
    std::vector<std::pair<int, double>> out;
    double total = 0.0;
    geo_->index->for_each_within(p, geo_->max_radius, [&](int id, double d2) {
        const double w = wendland(std::sqrt(d2), geo_->radii[static_cast<std::size_t>(id)]);
        if (w > 0.0) {
            out.emplace_back(id, w);
            total += w;
        }
    });
    // Accumulation order must not depend on bucket layout.
    std::sort(out.begin(), out.end());
    total = 0.0;
    for (const auto& e : out) total += e.second;
    for (auto& e : out) e.second /= total;
    return out;
}

double PUInterpolant::operator()(const Vec2& p) const
{
    const auto weights = blend_weights(p);
    if (!weights.empty()) {
        double v = 0.0;
        for (const auto& [id, w] : weights) v += w * local_value(static_cast<std::size_t>(id), p);
        return v;
    }
    const int j = geo_->index->nearest(p);
    if (j >= 0) {
        const double d = (geo_->centers[static_cast<std::size_t>(j)] - p).norm();
        if (d <= geo_->extension_factor * geo_->radii[static_cast<std::size_t>(j)])
            return local_value(static_cast<std::size_t>(j), p);
    }
    throw CoverageError("pu_eval: point " + describe(p) + " lies outside every patch");
}

PUInterpolant build_pu(const NodeSet& nodes, const ScalarField& values, PUOptions options, int support_size)
{
    require_aligned(values, nodes, "build_pu");
    const auto stencils = find_stencils(nodes, support_size);
    return PUApproximator(nodes, stencils, options).fit(values);
}

double pu_eval(const PUInterpolant& interp, const Vec2& point) { return interp(point); }

}  // namespace gem::meshless
