// numerics.hpp -- small numeric kernel: 3-vectors (real and complex),
// adaptive Gauss-Kronrod quadrature, Richardson extrapolation helpers.
//
// The quadrature is the workhorse behind every period/flux/curvature number
// in the library, so it is written once here and shared.
#ifndef MINSURF_NUMERICS_HPP
#define MINSURF_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace minsurf {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// vectors

struct vec3 {
  double x = 0, y = 0, z = 0;
  vec3() = default;
  vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
  vec3 operator+(const vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  vec3 operator-(const vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  vec3 operator-() const { return {-x, -y, -z}; }
  vec3& operator+=(const vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  vec3& operator-=(const vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  double dot(const vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  vec3 cross(const vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double norm_inf() const { return std::max({std::fabs(x), std::fabs(y), std::fabs(z)}); }
  vec3 normalized() const { return *this / norm(); }
};
inline vec3 operator*(double s, const vec3& v) { return v * s; }

struct cvec3 {
  cplx x{0, 0}, y{0, 0}, z{0, 0};
  cvec3() = default;
  cvec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
  cvec3 operator+(const cvec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  cvec3 operator-(const cvec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  cvec3& operator+=(const cvec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  cvec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
  cvec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  vec3 real() const { return {x.real(), y.real(), z.real()}; }
  vec3 imag() const { return {x.imag(), y.imag(), z.imag()}; }
};
inline cvec3 operator*(cplx s, const cvec3& v) { return v * s; }

// max-abs norms used for per-coordinate quadrature error control
inline double gk_norm(double v) { return std::fabs(v); }
inline double gk_norm(const cplx& v) { return std::max(std::fabs(v.real()), std::fabs(v.imag())); }
inline double gk_norm(const vec3& v) { return v.norm_inf(); }
inline double gk_norm(const cvec3& v) { return std::max({gk_norm(v.x), gk_norm(v.y), gk_norm(v.z)}); }

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod (G7,K15)

namespace detail {
// Kronrod-15 abscissae on [-1,1] (symmetric; only the nonnegative half stored)
// and the matching Kronrod and embedded Gauss-7 weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace detail

// One (G7,K15) panel on [a,b]: returns the K15 value, fills *err with the
// panel error estimate and *resabs with the integral of |f| (both in
// gk_norm); resabs sets the rounding-noise floor for the error estimate.
template <class T, class F>
T gk15_panel(F&& f, double a, double b, double* err, double* resabs = nullptr) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T fc = f(c);
  T result_g = fc * (detail::kWg[3] * h);
  T result_k = fc * (detail::kWgk[7] * h);
  double abs_k = gk_norm(fc) * (detail::kWgk[7] * std::fabs(h));
  for (int j = 0; j < 7; ++j) {
    const double dx = h * detail::kXgk[j];
    T f1 = f(c - dx);
    T f2 = f(c + dx);
    T fsum = f1 + f2;
    result_k += fsum * (detail::kWgk[j] * h);
    abs_k += (gk_norm(f1) + gk_norm(f2)) * (detail::kWgk[j] * std::fabs(h));
    if (j % 2 == 1) result_g += fsum * (detail::kWg[j / 2] * h);
  }
  *err = gk_norm(result_k - result_g);
  if (resabs) *resabs = abs_k;
  return result_k;
}

struct quad_options {
  double abs_tol = 1e-10;
  long max_panels = 1L << 22;  // practical cap; spec allows up to 2^40
};

// Adaptive bisection with a worst-first queue. Throws QuadratureNoConverge if
// the panel budget is exhausted before the summed error estimate meets tol.
template <class T, class F>
T integrate_adaptive(F&& f, double a, double b, const quad_options& opt = {}) {
  struct panel {
    double a, b, err;
    T val;
  };
  std::vector<panel> heap;
  auto cmp = [](const panel& p, const panel& q) { return p.err < q.err; };
  // Error estimates below the rounding floor of the |f| mass are frozen --
  // they measure cancellation noise, not quadrature error.
  auto floor_err = [](double err, double resabs) {
    return err <= 1e-13 * resabs ? 0.0 : err;
  };
  double err0, ra0;
  T v0 = gk15_panel<T>(f, a, b, &err0, &ra0);
  err0 = floor_err(err0, ra0);
  heap.push_back({a, b, err0, v0});
  long n_panels = 1;
  double total_err = err0;
  while (total_err > opt.abs_tol) {
    if (n_panels >= opt.max_panels)
      throw error(errc::quadrature_no_converge,
                  "adaptive quadrature: panel budget exhausted, err=" + std::to_string(total_err));
    std::pop_heap(heap.begin(), heap.end(), cmp);
    panel worst = heap.back();
    heap.pop_back();
    if (worst.err == 0.0 ||
        worst.b - worst.a < 1e-15 * (std::fabs(worst.a) + std::fabs(worst.b) + 1.0)) {
      // Either at the noise floor or unsplittable in double precision;
      // accept the panel as-is.
      total_err -= worst.err;
      heap.push_back({worst.a, worst.b, 0.0, worst.val});
      std::push_heap(heap.begin(), heap.end(), cmp);
      continue;
    }
    const double m = 0.5 * (worst.a + worst.b);
    double e1, e2, ra1, ra2;
    T v1 = gk15_panel<T>(f, worst.a, m, &e1, &ra1);
    T v2 = gk15_panel<T>(f, m, worst.b, &e2, &ra2);
    e1 = floor_err(e1, ra1);
    e2 = floor_err(e2, ra2);
    total_err += e1 + e2 - worst.err;
    heap.push_back({worst.a, m, e1, v1});
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back({m, worst.b, e2, v2});
    std::push_heap(heap.begin(), heap.end(), cmp);
    ++n_panels;
  }
  T sum = heap.front().val;
  for (size_t i = 1; i < heap.size(); ++i) sum += heap[i].val;
  return sum;
}

// ---------------------------------------------------------------------------
// Richardson extrapolation in a truncation/resolution parameter.
//
// Given T(h) and T(h/2) with T(h) = L + C h^p, returns the extrapolated L.
inline double richardson(double t_h, double t_h2, double p) {
  const double f = std::pow(2.0, p);
  return (f * t_h2 - t_h) / (f - 1.0);
}

// Estimate the convergence order p from three levels T(h), T(h/2), T(h/4).
inline double richardson_order(double t_h, double t_h2, double t_h4) {
  const double num = t_h - t_h2, den = t_h2 - t_h4;
  if (den == 0.0 || num / den <= 0.0) return 2.0;  // fall back to second order
  return std::log2(num / den);
}

// ---------------------------------------------------------------------------
// scalar root bracketing (used by oracle tests and a few parameter searches)

template <class F>
double golden_min(F&& f, double a, double b, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace minsurf

#endif  // MINSURF_NUMERICS_HPP
