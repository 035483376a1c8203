#include "conclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "conclab/parallel.hpp"
#include "conclab/rng.hpp"

namespace conclab {

namespace {

constexpr double kSheetTol = 1e-10;
constexpr double kTangentTol = 1e-10;
constexpr double kSphereTol = 1e-12;
// Below this value of -<x,y>_M - 1 the log map switches to its series branch.
constexpr double kNearBranch = 1e-8;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void check_finite(std::span<const double> v, const char* what) {
    if (!all_finite(v)) throw std::domain_error(std::string(what) + ": non-finite coordinates");
}

// acosh(1 + eps) evaluated without cancellation.
double acosh1p(double eps) {
    if (eps <= 0.0) return 0.0;
    return std::log1p(eps + std::sqrt(eps * (2.0 + eps)));
}

// eps = -<x,y>_M - 1 through the Minkowski square of the difference,
// which stays accurate when x and y nearly coincide.
double hyp_eps(std::span<const double> x, std::span<const double> y) {
    double d0 = x[0] - y[0];
    double q = -d0 * d0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        q += d * d;
    }
    return std::max(0.0, 0.5 * q);
}

void renormalize_to_sheet(std::span<double> y) {
    const double n2 = -minkowski_dot(y, y);
    const double s = 1.0 / std::sqrt(n2);
    for (double& c : y) c *= s;
    if (y[0] < 0.0)
        throw std::domain_error("hyperboloid: point left the upper sheet");
}

void project_to_tangent(std::span<const double> x, std::span<double> v) {
    const double mu = minkowski_dot(x, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += mu * x[i];
}

} // namespace

double minkowski_dot(std::span<const double> a, std::span<const double> b) {
    double s = -a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double hyp_distance_span(std::span<const double> x, std::span<const double> y) {
    return acosh1p(hyp_eps(x, y));
}

void hyp_exp_span(std::span<const double> x, std::span<const double> v,
                  std::span<double> out) {
    const double theta2 = std::max(0.0, minkowski_dot(v, v));
    const double theta = std::sqrt(theta2);
    if (theta == 0.0) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    const double ch = std::cosh(theta);
    const double sinc = theta < 1e-8 ? 1.0 + theta2 / 6.0 : std::sinh(theta) / theta;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ch * x[i] + sinc * v[i];
    renormalize_to_sheet(out);
}

void hyp_log_span(std::span<const double> x, std::span<const double> y,
                  std::span<double> out) {
    const double eps = hyp_eps(x, y);
    const double dist = acosh1p(eps);
    if (eps < kNearBranch) {
        // Tangent projection of the difference equals sinh(d) * u for the
        // unit direction u; rescaling it to length d gives the exact log.
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = y[i] - x[i];
        project_to_tangent(x, out);
        const double n = std::sqrt(std::max(0.0, minkowski_dot(out, out)));
        if (n == 0.0) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        const double s = dist / n;
        for (double& c : out) c *= s;
        return;
    }
    // y = cosh(d) x + sinh(d) u with cosh(d) = 1 + eps.
    const double sh = std::sqrt(eps * (2.0 + eps));
    const double s = dist / sh;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * (y[i] - (1.0 + eps) * x[i]);
    project_to_tangent(x, out);
}

double sphere_distance_span(std::span<const double> x, std::span<const double> y) {
    // 2 asin(|x-y|/2): accurate at both ends of [0, pi].
    const double half = 0.5 * euclidean_distance(x, y);
    return 2.0 * std::asin(std::min(1.0, half));
}

HyperbolicPoint::HyperbolicPoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.size() < 2) throw std::domain_error("HyperbolicPoint: need ambient dimension >= 2");
    check_finite(coords, "HyperbolicPoint");
    const double q = minkowski_dot(coords, coords);
    if (std::fabs(q + 1.0) > kSheetTol)
        throw std::domain_error("HyperbolicPoint: not on the hyperboloid (<x,x>_M != -1)");
    if (coords[0] < 1.0 - kSheetTol)
        throw std::domain_error("HyperbolicPoint: not on the upper sheet");
}

HyperbolicPoint HyperbolicPoint::origin(int dim) {
    std::vector<double> c(static_cast<std::size_t>(dim) + 1, 0.0);
    c[0] = 1.0;
    return HyperbolicPoint(std::move(c));
}

TangentVector::TangentVector(HyperbolicPoint b, std::vector<double> v)
    : base(std::move(b)), vec(std::move(v)) {
    if (vec.size() != base.coords.size())
        throw std::invalid_argument("TangentVector: dimension mismatch with base");
    check_finite(vec, "TangentVector");
    if (std::fabs(minkowski_dot(base.coords, vec)) > kTangentTol)
        throw std::domain_error("TangentVector: not Minkowski-orthogonal to base");
}

TangentVector TangentVector::zero(const HyperbolicPoint& base) {
    return TangentVector(base, std::vector<double>(base.coords.size(), 0.0));
}

double TangentVector::norm() const {
    return std::sqrt(std::max(0.0, minkowski_dot(vec, vec)));
}

SpherePoint::SpherePoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.size() < 2) throw std::domain_error("SpherePoint: need ambient dimension >= 2");
    check_finite(coords, "SpherePoint");
    if (std::fabs(euclidean_norm(coords) - 1.0) > kSphereTol)
        throw std::domain_error("SpherePoint: not a unit vector");
}

double hyp_distance(const HyperbolicPoint& x, const HyperbolicPoint& y) {
    if (x.coords.size() != y.coords.size())
        throw std::invalid_argument("hyp_distance: dimension mismatch");
    return hyp_distance_span(x.coords, y.coords);
}

HyperbolicPoint exp_map(const HyperbolicPoint& x, const TangentVector& v) {
    if (v.base.coords.size() != x.coords.size() ||
        euclidean_distance(v.base.coords, x.coords) > 1e-9)
        throw std::invalid_argument("exp_map: tangent vector not based at x");
    HyperbolicPoint out;
    out.coords.resize(x.coords.size());
    hyp_exp_span(x.coords, v.vec, out.coords);
    return out;
}

TangentVector log_map(const HyperbolicPoint& x, const HyperbolicPoint& y) {
    if (x.coords.size() != y.coords.size())
        throw std::invalid_argument("log_map: dimension mismatch");
    TangentVector out;
    out.base = x;
    out.vec.resize(x.coords.size());
    hyp_log_span(x.coords, y.coords, out.vec);
    return out;
}

double sphere_distance(const SpherePoint& x, const SpherePoint& y) {
    if (x.coords.size() != y.coords.size())
        throw std::invalid_argument("sphere_distance: dimension mismatch");
    return sphere_distance_span(x.coords, y.coords);
}

RowMatrix sample_sphere(int n, std::size_t count, std::uint64_t seed, int threads) {
    if (n < 1) throw std::domain_error("sample_sphere: n must be >= 1");
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    RowMatrix out(count, dim);
    parallel_for(count, threads, [&](std::size_t i) {
        auto row = out.row(i);
        for (std::uint64_t attempt = 0;; ++attempt) {
            CounterRng rng(seed, i, attempt);
            for (std::size_t j = 0; j < dim; j += 2) {
                double g0 = 0.0, g1 = 0.0;
                rng.next_gaussian_pair(g0, g1);
                row[j] = g0;
                if (j + 1 < dim) row[j + 1] = g1;
            }
            const double norm = euclidean_norm(row);
            if (norm > 0.0) {
                for (double& c : row) c /= norm;
                break;
            }
        }
    });
    return out;
}

std::vector<SpherePoint> to_sphere_points(const RowMatrix& samples) {
    std::vector<SpherePoint> pts;
    pts.reserve(samples.rows);
    for (std::size_t i = 0; i < samples.rows; ++i) {
        auto r = samples.row(i);
        pts.push_back(SpherePoint(std::vector<double>(r.begin(), r.end())));
    }
    return pts;
}

std::vector<double> project_to_rm(std::span<const double> x, int m) {
    if (m < 1 || static_cast<std::size_t>(m) + 1 > x.size())
        throw std::domain_error("project_to_rm: need 1 <= m <= n");
    return std::vector<double>(x.begin(), x.begin() + m);
}

HyperbolicPoint hyperbolic_embed(std::span<const double> z, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("hyperbolic_embed: scale must be positive");
    check_finite(z, "hyperbolic_embed");
    const double theta = scale * euclidean_norm(z);
    HyperbolicPoint out;
    out.coords.resize(z.size() + 1);
    out.coords[0] = std::cosh(theta);
    const double sinc = theta < 1e-8 ? 1.0 + theta * theta / 6.0 : std::sinh(theta) / theta;
    for (std::size_t i = 0; i < z.size(); ++i) out.coords[i + 1] = sinc * scale * z[i];
    renormalize_to_sheet(out.coords);
    return out;
}

double default_embed_scale() { return std::asinh(1.0); }

LipschitzMap LipschitzMap::projection(int n, int m) {
    if (m < 1 || m > n) throw std::domain_error("projection map: need 1 <= m <= n");
    LipschitzMap f;
    f.kind = MapKind::Projection;
    f.source_dim = n;
    f.target_dim = m;
    f.declared_lipschitz = 1.0;
    return f;
}

LipschitzMap LipschitzMap::hyperbolic_projection(int n, int m, double scale) {
    if (m < 1 || m > n) throw std::domain_error("hyperbolic map: need 1 <= m <= n");
    if (!(scale > 0.0)) throw std::domain_error("hyperbolic map: scale must be positive");
    LipschitzMap f;
    f.kind = MapKind::HyperbolicProjection;
    f.source_dim = n;
    f.target_dim = m;
    f.scale = scale;
    // Radial stretch is `scale`, orthogonal stretch at radius s is
    // sinh(scale*s)/s, maximized on the unit ball at s = 1.
    f.declared_lipschitz = std::sinh(scale);
    return f;
}

LipschitzMap LipschitzMap::coordinate_map(int n, int index) {
    if (index < 0 || index > n) throw std::domain_error("coordinate map: index out of range");
    LipschitzMap f;
    f.kind = MapKind::Coordinate;
    f.source_dim = n;
    f.target_dim = 1;
    f.coordinate = index;
    f.declared_lipschitz = 1.0;
    return f;
}

void LipschitzMap::apply(std::span<const double> x, std::span<double> out) const {
    switch (kind) {
        case MapKind::Projection:
            for (int j = 0; j < target_dim; ++j) out[j] = x[j];
            return;
        case MapKind::Coordinate:
            out[0] = x[coordinate];
            return;
        case MapKind::HyperbolicProjection: {
            const HyperbolicPoint p =
                hyperbolic_embed(x.subspan(0, target_dim), scale);
            std::copy(p.coords.begin(), p.coords.end(), out.begin());
            return;
        }
    }
}

RowMatrix LipschitzMap::apply_all(const RowMatrix& samples, int threads) const {
    RowMatrix out(samples.rows, static_cast<std::size_t>(ambient_target_dim()));
    parallel_for(samples.rows, threads,
                 [&](std::size_t i) { apply(samples.row(i), out.row(i)); });
    return out;
}

double LipschitzMap::target_distance(std::span<const double> a,
                                     std::span<const double> b) const {
    return target_space() == TargetSpace::Hyperbolic ? hyp_distance_span(a, b)
                                                     : euclidean_distance(a, b);
}

std::string LipschitzMap::name() const {
    switch (kind) {
        case MapKind::Projection:
            return "proj" + std::to_string(target_dim);
        case MapKind::HyperbolicProjection:
            return "hyp" + std::to_string(target_dim);
        case MapKind::Coordinate:
            return "coord" + std::to_string(coordinate);
    }
    return "map";
}

double estimate_lipschitz(const LipschitzMap& f, const RowMatrix& samples) {
    if (samples.rows < 2)
        throw std::domain_error("estimate_lipschitz: need at least 2 samples");
    const RowMatrix images = f.apply_all(samples);
    double best = 0.0;
    for (std::size_t i = 0; i < samples.rows; ++i) {
        for (std::size_t j = i + 1; j < samples.rows; ++j) {
            const double ds = sphere_distance_span(samples.row(i), samples.row(j));
            if (ds == 0.0) continue;
            const double dt = f.target_distance(images.row(i), images.row(j));
            if (dt / ds > best) best = dt / ds;
        }
    }
    return best;
}

TangentFrame::TangentFrame(HyperbolicPoint base) : base_(std::move(base)) {
    const int m = base_.dim();
    const std::size_t ambient = static_cast<std::size_t>(m) + 1;
    basis_ = RowMatrix(static_cast<std::size_t>(m), ambient);
    // Project the spatial ambient axes onto the tangent space and run
    // Gram-Schmidt in the Minkowski metric (positive definite there). The
    // projections e_i + <b,e_i>_M b are always independent, so this cannot
    // degenerate.
    for (int i = 0; i < m; ++i) {
        auto row = basis_.row(static_cast<std::size_t>(i));
        std::fill(row.begin(), row.end(), 0.0);
        row[static_cast<std::size_t>(i) + 1] = 1.0;
        project_to_tangent(base_.coords, row);
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < i; ++k) {
                const double mu = minkowski_dot(basis_.row(static_cast<std::size_t>(k)), row);
                auto prev = basis_.row(static_cast<std::size_t>(k));
                for (std::size_t j = 0; j < ambient; ++j) row[j] -= mu * prev[j];
            }
        }
        const double norm = std::sqrt(minkowski_dot(row, row));
        for (double& c : row) c /= norm;
    }
}

std::vector<double> TangentFrame::coordinates(std::span<const double> ambient) const {
    std::vector<double> out(static_cast<std::size_t>(dim()), 0.0);
    coordinates(ambient, out);
    return out;
}

void TangentFrame::coordinates(std::span<const double> ambient,
                               std::span<double> out) const {
    for (std::size_t k = 0; k < basis_.rows; ++k)
        out[k] = minkowski_dot(basis_.row(k), ambient);
}

std::vector<double> TangentFrame::ambient(std::span<const double> coords) const {
    std::vector<double> out(base_.coords.size(), 0.0);
    for (std::size_t k = 0; k < basis_.rows; ++k) {
        auto row = basis_.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += coords[k] * row[j];
    }
    return out;
}

} // namespace conclab
