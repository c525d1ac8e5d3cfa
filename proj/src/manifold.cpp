#include "gbeam/manifold.hpp"

#include <cmath>

#include "gbeam/ode.hpp"

namespace gbeam {

Catalog catalog_from_string(const std::string& s) {
  if (s == "euclidean_disk") return Catalog::euclidean_disk;
  if (s == "constant_curvature_disk") return Catalog::constant_curvature_disk;
  if (s == "radial_conformal") return Catalog::radial_conformal;
  throw std::runtime_error("unknown catalog_id: " + s);
}

std::string catalog_to_string(Catalog c) {
  switch (c) {
    case Catalog::euclidean_disk: return "euclidean_disk";
    case Catalog::constant_curvature_disk: return "constant_curvature_disk";
    case Catalog::radial_conformal: return "radial_conformal";
  }
  return "?";
}

TransversalManifold TransversalManifold::euclidean_disk(double R) {
  TransversalManifold m;
  m.catalog = Catalog::euclidean_disk;
  m.radius = R;
  return m;
}

TransversalManifold TransversalManifold::constant_curvature_disk(double kappa, double R) {
  TransversalManifold m;
  m.catalog = Catalog::constant_curvature_disk;
  m.kappa = kappa;
  m.radius = R;
  if (1.0 + kappa * R * R / 4.0 <= 0.0)
    throw std::runtime_error("constant_curvature_disk: conformal factor degenerates inside disk");
  return m;
}

TransversalManifold TransversalManifold::radial_conformal(double A, double w, double R) {
  TransversalManifold m;
  m.catalog = Catalog::radial_conformal;
  m.lens_amp = A;
  m.lens_width = w;
  m.radius = R;
  if (1.0 + A <= 0.0) throw std::runtime_error("radial_conformal: profile must stay positive");
  return m;
}

double TransversalManifold::phi(const Vec2& x) const {
  switch (catalog) {
    case Catalog::euclidean_disk: return 0.0;
    case Catalog::constant_curvature_disk: return -std::log(1.0 + kappa * x.squaredNorm() / 4.0);
    case Catalog::radial_conformal:
      return std::log(1.0 + lens_amp * std::exp(-x.squaredNorm() / (lens_width * lens_width)));
  }
  return 0.0;
}

Vec2 TransversalManifold::phi_grad(const Vec2& x) const {
  switch (catalog) {
    case Catalog::euclidean_disk: return Vec2::Zero();
    case Catalog::constant_curvature_disk: {
      const double f = 1.0 + kappa * x.squaredNorm() / 4.0;
      return (-kappa / (2.0 * f)) * x;
    }
    case Catalog::radial_conformal: {
      const double w2 = lens_width * lens_width;
      const double e = lens_amp * std::exp(-x.squaredNorm() / w2);
      return (-2.0 * e / (w2 * (1.0 + e))) * x;
    }
  }
  return Vec2::Zero();
}

Mat2 TransversalManifold::metric(const Vec2& x) const {
  return std::exp(2.0 * phi(x)) * Mat2::Identity();
}

Mat2 TransversalManifold::metric_inv(const Vec2& x) const {
  return std::exp(-2.0 * phi(x)) * Mat2::Identity();
}

double TransversalManifold::sqrt_det_metric(const Vec2& x) const {
  return std::exp(2.0 * phi(x));
}

double TransversalManifold::rho(const Vec2& x) const {
  return (x.squaredNorm() - radius * radius) / (2.0 * radius);
}

Vec2 TransversalManifold::rho_grad(const Vec2& x) const { return x / radius; }

Vec2 TransversalManifold::unit_normal(const Vec2& x) const {
  // outward g-unit normal; for conformal metrics the direction is Euclidean-radial
  Vec2 n = rho_grad(x);
  const double ng = norm_g(x, n);
  if (ng < 1e-14) throw std::runtime_error("degenerate boundary normal");
  return n / ng;
}

std::array<Vec2, 2> TransversalManifold::bounding_box() const {
  return {Vec2(-radius, -radius), Vec2(radius, radius)};
}

double TransversalManifold::bbox_diameter() const { return 2.0 * std::sqrt(2.0) * radius; }

double TransversalManifold::inner(const Vec2& x, const Vec2& u, const Vec2& w) const {
  return std::exp(2.0 * phi(x)) * u.dot(w);
}

double TransversalManifold::norm_g(const Vec2& x, const Vec2& u) const {
  return std::exp(phi(x)) * u.norm();
}

Vec2 TransversalManifold::geodesic_acc(const Vec2& x, const Vec2& v) const {
  // conformal metric: Gamma^k_ij = d_i phi delta_jk + d_j phi delta_ik - d_k phi delta_ij
  const Vec2 g = phi_grad(x);
  return v.squaredNorm() * g - 2.0 * v.dot(g) * v;
}

std::array<Mat2, 2> christoffel(const TransversalManifold& m, const Vec2& x) {
  const auto bb = m.bounding_box();
  if (x[0] < bb[0][0] - 1e-9 || x[1] < bb[0][1] - 1e-9 || x[0] > bb[1][0] + 1e-9 ||
      x[1] > bb[1][1] + 1e-9)
    throw std::runtime_error("christoffel: point outside bounding box");
  Eigen::SelfAdjointEigenSolver<Mat2> es(m.metric(x));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("christoffel: metric not positive definite");

  const double h = m.h_fd;
  std::array<Mat2, 2> dg;  // dg[l] = d g / d x_l
  for (int l = 0; l < 2; ++l) {
    Vec2 xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    dg[l] = (m.metric(xp) - m.metric(xm)) / (2.0 * h);
  }
  const Mat2 gi = m.metric_inv(x);
  std::array<Mat2, 2> gamma;
  for (int k = 0; k < 2; ++k) {
    Mat2 G;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += gi(k, l) * (dg[j](l, i) + dg[i](l, j) - dg[l](i, j));
        G(i, j) = 0.5 * s;
      }
    gamma[k] = G;
  }
  return gamma;
}

std::array<Mat2, 2> christoffel_analytic(const TransversalManifold& m, const Vec2& x) {
  const Vec2 g = m.phi_grad(x);
  std::array<Mat2, 2> gamma;
  for (int k = 0; k < 2; ++k) {
    Mat2 G;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        G(i, j) = (i == k ? g[j] : 0.0) + (j == k ? g[i] : 0.0) - (i == j ? g[k] : 0.0);
    gamma[k] = G;
  }
  return gamma;
}

namespace {

using State4 = Eigen::Vector4d;

State4 pack(const Vec2& x, const Vec2& v) {
  State4 s;
  s << x[0], x[1], v[0], v[1];
  return s;
}

// cubic Hermite on one sample interval
Vec2 hermite_pos(const GeodesicSample& a, const GeodesicSample& b, double tau) {
  const double dt = b.tau - a.tau;
  if (dt <= 0) return a.x;
  const double s = (tau - a.tau) / dt;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * a.x + h10 * dt * a.v + h01 * b.x + h11 * dt * b.v;
}

Vec2 hermite_vel(const GeodesicSample& a, const GeodesicSample& b, double tau) {
  const double dt = b.tau - a.tau;
  if (dt <= 0) return a.v;
  const double s = (tau - a.tau) / dt;
  const double d00 = (6 * s * s - 6 * s) / dt;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = (6 * s - 6 * s * s) / dt;
  const double d11 = 3 * s * s - 2 * s;
  return d00 * a.x + d10 * a.v + d01 * b.x + d11 * b.v;
}

std::size_t bracket(const std::vector<GeodesicSample>& ss, double tau) {
  std::size_t lo = 0, hi = ss.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (ss[mid].tau <= tau)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

Vec2 GeodesicSegment::position(double tau) const {
  if (samples.size() < 2) return samples.empty() ? Vec2::Zero() : samples[0].x;
  const std::size_t i = bracket(samples, tau);
  return hermite_pos(samples[i], samples[i + 1], tau);
}

Vec2 GeodesicSegment::velocity(double tau) const {
  if (samples.size() < 2) return samples.empty() ? Vec2::Zero() : samples[0].v;
  const std::size_t i = bracket(samples, tau);
  return hermite_vel(samples[i], samples[i + 1], tau);
}

GeodesicSegment geodesic_trace(const TransversalManifold& m, const Vec2& x, const Vec2& xi,
                               const TraceOptions& opt) {
  if (std::abs(m.rho(x)) > 1e-8) throw std::runtime_error("geodesic_trace: start not on boundary");
  const Vec2 nu = m.unit_normal(x);
  const double inc = m.inner(x, xi, nu);
  if (inc >= 0.0) throw std::runtime_error("geodesic_trace: direction not inward");
  if (std::abs(inc) < m.tangency_tol * m.norm_g(x, xi))
    throw std::runtime_error("geodesic_trace: tangential entry");

  const double tau_max = opt.tau_max_factor * m.bbox_diameter();
  auto rhs = [&m](double, const State4& s) {
    const Vec2 xx(s[0], s[1]), vv(s[2], s[3]);
    const Vec2 a = m.geodesic_acc(xx, vv);
    return pack(vv, a);
  };

  // nudge inside so the exit monitor does not fire at tau = 0
  GeodesicSegment seg;
  OdeOptions oo;
  oo.abs_tol = opt.abs_tol;
  oo.rel_tol = opt.abs_tol;
  oo.h_max = opt.h_max;
  auto run = integrate_rk45(
      rhs, 0.0, tau_max, pack(x, xi), oo, nullptr,
      [&m](double, const State4& s) { return m.rho(Vec2(s[0], s[1])) > 0.0; });

  // find the first sample with rho > 0 and bisect the crossing inside that step
  std::vector<GeodesicSample> ss;
  ss.reserve(run.t.size());
  std::size_t cross = run.t.size();
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const Vec2 xx(run.y[i][0], run.y[i][1]), vv(run.y[i][2], run.y[i][3]);
    ss.push_back({run.t[i], xx, vv});
    if (i > 0 && m.rho(xx) > 0.0) {
      cross = i;
      break;
    }
  }
  if (cross == run.t.size()) {
    // trapped: +inf sentinel
    seg.samples = std::move(ss);
    seg.entry_point = x;
    seg.entry_dir = xi;
    seg.exit_time = std::numeric_limits<double>::infinity();
    return seg;
  }

  const GeodesicSample& a = ss[cross - 1];
  const GeodesicSample& b = ss[cross];
  double lo = a.tau, hi = b.tau;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m.rho(hermite_pos(a, b, mid)) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double texit = 0.5 * (lo + hi);
  GeodesicSample ex;
  ex.tau = texit;
  ex.x = hermite_pos(a, b, texit);
  ex.v = hermite_vel(a, b, texit);
  ss.resize(cross);  // drop the outside sample
  if (ex.tau > ss.back().tau + 1e-14) ss.push_back(ex);

  seg.samples = std::move(ss);
  seg.entry_point = x;
  seg.entry_dir = xi;
  seg.exit_time = texit;
  seg.exit_point = ex.x;
  seg.exit_dir = ex.v;
  seg.non_tangential = is_non_tangential(seg, m);
  return seg;
}

GeodesicSegment extend_segment(const TransversalManifold& m, const GeodesicSegment& seg,
                               double eps, const TraceOptions& opt) {
  if (seg.trapped()) throw std::runtime_error("extend_segment: trapped segment");
  auto rhs = [&m](double, const State4& s) {
    const Vec2 xx(s[0], s[1]), vv(s[2], s[3]);
    return pack(vv, m.geodesic_acc(xx, vv));
  };
  OdeOptions oo;
  oo.abs_tol = opt.abs_tol;
  oo.rel_tol = opt.abs_tol;
  oo.h_max = opt.h_max;

  GeodesicSegment out = seg;
  // forward from exit
  {
    auto run = integrate_rk45(rhs, seg.exit_time, seg.exit_time + eps,
                              pack(seg.exit_point, seg.exit_dir), oo);
    for (std::size_t i = 1; i < run.t.size(); ++i)
      out.samples.push_back({run.t[i], Vec2(run.y[i][0], run.y[i][1]), Vec2(run.y[i][2], run.y[i][3])});
  }
  // backward from entry
  {
    auto run = integrate_rk45(rhs, 0.0, -eps, pack(seg.entry_point, seg.entry_dir), oo);
    std::vector<GeodesicSample> pre;
    for (std::size_t i = 1; i < run.t.size(); ++i)
      pre.push_back({run.t[i], Vec2(run.y[i][0], run.y[i][1]), Vec2(run.y[i][2], run.y[i][3])});
    std::reverse(pre.begin(), pre.end());
    pre.insert(pre.end(), out.samples.begin(), out.samples.end());
    out.samples = std::move(pre);
  }
  out.tau_min = -eps;
  return out;
}

bool is_non_tangential(const GeodesicSegment& seg, const TransversalManifold& m) {
  if (seg.trapped() || seg.samples.size() < 2) return false;
  const Vec2 nu_in = m.unit_normal(seg.entry_point);
  const Vec2 nu_out = m.unit_normal(seg.exit_point);
  const double inc_in = std::abs(m.inner(seg.entry_point, seg.entry_dir, nu_in));
  const double inc_out = std::abs(m.inner(seg.exit_point, seg.exit_dir, nu_out));
  if (inc_in <= m.tangency_tol || inc_out <= m.tangency_tol) return false;
  const double L = seg.exit_time;
  const double margin = std::min(0.1, 0.1 * L);
  for (const auto& s : seg.samples) {
    if (s.tau < margin || s.tau > L - margin) continue;
    if (m.rho(s.x) >= -m.interior_tol) return false;
  }
  return true;
}

std::vector<Vec2> parallel_transport(const TransversalManifold& m, const GeodesicSegment& seg,
                                     const Vec2& w0) {
  // w'^k = -Gamma^k_ij gamma'^i w^j, integrated sample-to-sample with RK4
  std::vector<Vec2> out;
  out.reserve(seg.samples.size());
  Vec2 w = w0;
  out.push_back(w);
  auto deriv = [&](double tau, const Vec2& ww) -> Vec2 {
    const Vec2 x = seg.position(tau);
    const Vec2 v = seg.velocity(tau);
    const Vec2 g = m.phi_grad(x);
    // conformal shortcut of -Gamma^k_ij v^i w^j
    return -(v.dot(g) * ww + ww.dot(g) * v - v.dot(ww) * g);
  };
  for (std::size_t i = 1; i < seg.samples.size(); ++i) {
    const double t0 = seg.samples[i - 1].tau;
    const double t1 = seg.samples[i].tau;
    const double span = t1 - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(span / 0.005)));
    const double h = span / nsub;
    double t = t0;
    for (int k = 0; k < nsub; ++k) {
      const Vec2 k1 = deriv(t, w);
      const Vec2 k2 = deriv(t + 0.5 * h, w + 0.5 * h * k1);
      const Vec2 k3 = deriv(t + 0.5 * h, w + 0.5 * h * k2);
      const Vec2 k4 = deriv(t + h, w + h * k3);
      w += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      t += h;
    }
    out.push_back(w);
  }
  return out;
}

std::vector<InflowSample> sample_inflow_boundary(const TransversalManifold& m, int n_points,
                                                 int n_dirs, double margin_angle) {
  if (n_points < 1 || n_dirs < 1) throw std::runtime_error("sample_inflow_boundary: counts >= 1");
  std::vector<InflowSample> out;
  out.reserve(static_cast<std::size_t>(n_points) * n_dirs);
  for (int i = 0; i < n_points; ++i) {
    const double th = 2.0 * M_PI * (i + 0.5) / n_points;
    const Vec2 x(m.radius * std::cos(th), m.radius * std::sin(th));
    const Vec2 inward = -Vec2(std::cos(th), std::sin(th));
    const Vec2 tang(-std::sin(th), std::cos(th));
    const double ephi = std::exp(m.phi(x));
    for (int j = 0; j < n_dirs; ++j) {
      const double a = -M_PI / 2 + margin_angle +
                       (M_PI - 2 * margin_angle) * (j + 0.5) / n_dirs;
      // conformal metric: g-angles equal Euclidean angles; divide by e^phi for unit g-norm
      const Vec2 xi = (std::cos(a) * inward + std::sin(a) * tang) / ephi;
      out.push_back({x, xi});
    }
  }
  return out;
}

}  // namespace gbeam
