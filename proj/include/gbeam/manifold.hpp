// gbeam - transversal manifold geometry kernel
//
// Catalog of 2-D disks with conformal metrics g = e^{2 phi} delta:
//   euclidean_disk            phi = 0
//   constant_curvature_disk   phi = -log(1 + kappa |x|^2 / 4)   (Gauss curvature kappa)
//   radial_conformal          phi =  log(1 + A exp(-|x|^2/w^2)) (lens profile)
// Interfaces carry an explicit dim; the desk-scale kernel is 2-D.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbeam/util.hpp"

namespace gbeam {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class Catalog { euclidean_disk, constant_curvature_disk, radial_conformal };

Catalog catalog_from_string(const std::string& s);
std::string catalog_to_string(Catalog c);

struct TraceOptions {
  double abs_tol = 1e-10;
  double h_max = 0.02;
  double tau_max_factor = 100.0;  // times bounding-box diameter, trapped-ray guard
};

struct GeodesicSample {
  double tau;
  Vec2 x;
  Vec2 v;
};

struct GeodesicSegment {
  std::vector<GeodesicSample> samples;
  double exit_time = std::numeric_limits<double>::infinity();
  Vec2 entry_point = Vec2::Zero();
  Vec2 exit_point = Vec2::Zero();
  Vec2 entry_dir = Vec2::Zero();
  Vec2 exit_dir = Vec2::Zero();
  bool non_tangential = false;
  double tau_min = 0.0;  // samples may extend beyond [0, exit_time] (extension)

  bool trapped() const { return !std::isfinite(exit_time); }
  double length() const { return exit_time; }
  // cubic Hermite interpolation between stored samples
  Vec2 position(double tau) const;
  Vec2 velocity(double tau) const;
};

struct TransversalManifold {
  Catalog catalog = Catalog::euclidean_disk;
  int dim = 2;
  double radius = 1.0;
  double kappa = -1.0;       // constant_curvature_disk parameter
  double lens_amp = 0.0;     // radial_conformal amplitude A
  double lens_width = 0.25;  // radial_conformal width w
  double h_fd = 1e-5;        // metric finite-difference step
  double tangency_tol = 0.05;
  double interior_tol = 1e-6;

  static TransversalManifold euclidean_disk(double R = 1.0);
  static TransversalManifold constant_curvature_disk(double kappa, double R = 1.0);
  static TransversalManifold radial_conformal(double A, double w, double R = 1.0);

  // conformal factor and derivatives (analytic)
  double phi(const Vec2& x) const;
  Vec2 phi_grad(const Vec2& x) const;

  Mat2 metric(const Vec2& x) const;          // g_ij
  Mat2 metric_inv(const Vec2& x) const;      // g^ij
  double sqrt_det_metric(const Vec2& x) const;

  double rho(const Vec2& x) const;           // boundary fn, interior < 0
  Vec2 rho_grad(const Vec2& x) const;
  Vec2 unit_normal(const Vec2& x) const;     // outward, g-unit
  std::array<Vec2, 2> bounding_box() const;  // {min, max} corners
  double bbox_diameter() const;

  double inner(const Vec2& x, const Vec2& u, const Vec2& w) const;  // <u,w>_g at x
  double norm_g(const Vec2& x, const Vec2& u) const;

  // geodesic acceleration in coordinates: a^k = -Gamma^k_ij v^i v^j (analytic)
  Vec2 geodesic_acc(const Vec2& x, const Vec2& v) const;
};

// Christoffel symbols Gamma[k](i,j) by central finite differences of the metric.
std::array<Mat2, 2> christoffel(const TransversalManifold& m, const Vec2& x);
// Analytic symbols for the conformal catalog (cross-check / fast path).
std::array<Mat2, 2> christoffel_analytic(const TransversalManifold& m, const Vec2& x);

// Traces the unit-speed geodesic from boundary point x with inward g-unit
// direction xi until it exits.  The returned samples cover [0, exit_time].
// Throws on tangential starts; trapped rays return the +inf sentinel.
GeodesicSegment geodesic_trace(const TransversalManifold& m, const Vec2& x, const Vec2& xi,
                               const TraceOptions& opt = {});

// Extends a traced segment past both endpoints by eps (the extension keeps the
// analytic catalog metric), prepending/appending samples.
GeodesicSegment extend_segment(const TransversalManifold& m, const GeodesicSegment& seg,
                               double eps, const TraceOptions& opt = {});

bool is_non_tangential(const GeodesicSegment& seg, const TransversalManifold& m);

// Parallel transport of w0 from seg start along the segment; result aligned
// with seg.samples.
std::vector<Vec2> parallel_transport(const TransversalManifold& m, const GeodesicSegment& seg,
                                     const Vec2& w0);

// Inflow boundary sampling: n_points uniform boundary points x n_dirs inward
// directions with incidence angles in (-pi/2 + margin, pi/2 - margin).
struct InflowSample {
  Vec2 x;
  Vec2 xi;
};
std::vector<InflowSample> sample_inflow_boundary(const TransversalManifold& m, int n_points,
                                                 int n_dirs, double margin_angle = 0.06);

}  // namespace gbeam
