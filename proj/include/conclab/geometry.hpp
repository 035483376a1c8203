#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "conclab/row_matrix.hpp"

namespace conclab {

// ---------------------------------------------------------------------------
// Model spaces: the hyperboloid model of H^m in Minkowski space R^{m,1},
// the unit sphere S^n in R^{n+1}, and Euclidean R^m.
//
// Hyperboloid conventions: ambient vectors are (x0, x1, ..., xm) with
// <x,y>_M = -x0*y0 + sum_i xi*yi; points satisfy <x,x>_M = -1, x0 >= 1.
// ---------------------------------------------------------------------------

double minkowski_dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> v);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Span-level kernels (no validation; inputs assumed on-model).
double hyp_distance_span(std::span<const double> x, std::span<const double> y);
void hyp_exp_span(std::span<const double> x, std::span<const double> v,
                  std::span<double> out);
void hyp_log_span(std::span<const double> x, std::span<const double> y,
                  std::span<double> out);
double sphere_distance_span(std::span<const double> x, std::span<const double> y);

// A point on the upper sheet of the hyperboloid, ambient dimension dim()+1.
struct HyperbolicPoint {
    std::vector<double> coords;

    HyperbolicPoint() = default;
    explicit HyperbolicPoint(std::vector<double> c);

    static HyperbolicPoint origin(int dim);

    int dim() const { return static_cast<int>(coords.size()) - 1; }
    std::span<const double> span() const { return coords; }
};

// Tangent vector at `base`: Minkowski-orthogonal to it.
struct TangentVector {
    HyperbolicPoint base;
    std::vector<double> vec;

    TangentVector() = default;
    TangentVector(HyperbolicPoint b, std::vector<double> v);

    static TangentVector zero(const HyperbolicPoint& base);

    double norm() const;
    std::span<const double> span() const { return vec; }
};

struct SpherePoint {
    std::vector<double> coords;

    SpherePoint() = default;
    explicit SpherePoint(std::vector<double> c);

    int dim() const { return static_cast<int>(coords.size()) - 1; }
    std::span<const double> span() const { return coords; }
};

// Geodesic distance acosh(-<x,y>_M), evaluated through the Minkowski square
// of the coordinate difference so nearby points do not cancel.
double hyp_distance(const HyperbolicPoint& x, const HyperbolicPoint& y);

// exp_x(v); renormalized back onto the sheet after evaluation.
// exp_x(0) returns x exactly.
HyperbolicPoint exp_map(const HyperbolicPoint& x, const TangentVector& v);

// Inverse of exp_map. |log_map(x,y)|_M equals hyp_distance(x,y); coincident
// and nearly coincident inputs take a series branch instead of acosh.
TangentVector log_map(const HyperbolicPoint& x, const HyperbolicPoint& y);

double sphere_distance(const SpherePoint& x, const SpherePoint& y);

// `count` uniform points on S^n as rows of a (count x n+1) matrix. Pure
// function of (n, count, seed): each row is drawn from its own counter-based
// stream, so the result is independent of `threads`.
RowMatrix sample_sphere(int n, std::size_t count, std::uint64_t seed,
                        int threads = 1);

std::vector<SpherePoint> to_sphere_points(const RowMatrix& samples);

// First m coordinates. 1-Lipschitz from geodesic distance on the sphere to
// Euclidean distance.
std::vector<double> project_to_rm(std::span<const double> x, int m);

// exp_o(scale * z) at the hyperboloid origin o. On the Euclidean unit ball
// the Lipschitz constant into H^m is sinh(scale); the default scale
// asinh(1) makes it exactly 1.
HyperbolicPoint hyperbolic_embed(std::span<const double> z, double scale);

double default_embed_scale(); // asinh(1)

// ---------------------------------------------------------------------------
// Lipschitz test maps S^n -> target.
// ---------------------------------------------------------------------------

enum class MapKind {
    Projection,           // S^n -> R^m, first m coordinates
    HyperbolicProjection, // S^n -> H^m, exp_o(scale * projection)
    Coordinate,           // S^n -> R, one coordinate
};

enum class TargetSpace { Euclidean, Hyperbolic };

struct LipschitzMap {
    MapKind kind = MapKind::Projection;
    int source_dim = 1; // n of S^n
    int target_dim = 1; // m
    double scale = 1.0; // embed scale (HyperbolicProjection only)
    int coordinate = 0; // index (Coordinate only)
    double declared_lipschitz = 1.0;

    static LipschitzMap projection(int n, int m);
    static LipschitzMap hyperbolic_projection(int n, int m, double scale);
    static LipschitzMap coordinate_map(int n, int index);

    TargetSpace target_space() const {
        return kind == MapKind::HyperbolicProjection ? TargetSpace::Hyperbolic
                                                     : TargetSpace::Euclidean;
    }
    // Number of stored coordinates per image point (m, or m+1 ambient for
    // hyperbolic targets).
    int ambient_target_dim() const {
        return kind == MapKind::HyperbolicProjection ? target_dim + 1
               : kind == MapKind::Coordinate         ? 1
                                                     : target_dim;
    }
    void apply(std::span<const double> x, std::span<double> out) const;
    RowMatrix apply_all(const RowMatrix& samples, int threads = 1) const;

    // Distance between two stored image points.
    double target_distance(std::span<const double> a,
                           std::span<const double> b) const;
    std::string name() const;
};

// Max over all distinct pairs of d_target(f(x), f(y)) / d_source(x, y);
// coincident source pairs are skipped. Lower-bounds the true constant.
double estimate_lipschitz(const LipschitzMap& f, const RowMatrix& sphere_samples);

// Generic variant used by tests and custom maps.
template <typename MapFn, typename SrcDist, typename DstDist>
double estimate_lipschitz_ratio(const RowMatrix& samples, MapFn&& f,
                                SrcDist&& src_dist, DstDist&& dst_dist) {
    double best = 0.0;
    std::vector<std::vector<double>> images(samples.rows);
    for (std::size_t i = 0; i < samples.rows; ++i) images[i] = f(samples.row(i));
    for (std::size_t i = 0; i < samples.rows; ++i) {
        for (std::size_t j = i + 1; j < samples.rows; ++j) {
            const double ds = src_dist(samples.row(i), samples.row(j));
            if (ds == 0.0) continue;
            const double dt = dst_dist(images[i], images[j]);
            if (dt / ds > best) best = dt / ds;
        }
    }
    return best;
}

// Minkowski-orthonormal basis of the tangent space at a hyperboloid point;
// converts ambient tangent vectors to R^m coordinates and back. Euclidean
// norms of coordinates equal Minkowski norms of the ambient vectors.
class TangentFrame {
  public:
    explicit TangentFrame(HyperbolicPoint base);

    int dim() const { return base_.dim(); }
    const HyperbolicPoint& base() const { return base_; }

    std::vector<double> coordinates(std::span<const double> ambient) const;
    void coordinates(std::span<const double> ambient, std::span<double> out) const;
    std::vector<double> ambient(std::span<const double> coords) const;

  private:
    HyperbolicPoint base_;
    RowMatrix basis_; // dim rows of ambient dimension dim+1
};

} // namespace conclab
