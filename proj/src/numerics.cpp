#include "milne/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "milne/errors.hpp"

namespace milne::numerics {

std::vector<double> derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) fail(ErrorCode::internal, "derivative: need at least 5 samples");
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
  d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  d[1] = (f[2] - f[0]) / (2 * h);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2 * h);
  d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  return d;
}

std::vector<double> derivative_o2(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) fail(ErrorCode::internal, "derivative_o2: need at least 3 samples");
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  d[0] = (f[1] - f[0]) / h;
  d[n - 1] = (f[n - 1] - f[n - 2]) / h;
  return d;
}

std::vector<double> derivative_o6(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 7) fail(ErrorCode::internal, "derivative_o6: need 7 samples");
  std::vector<double> d = derivative(f, h);  // O(h^4) fallback at the margins
  for (std::size_t i = 3; i + 3 < n; ++i)
    d[i] = (-f[i - 3] + 9 * f[i - 2] - 45 * f[i - 1] + 45 * f[i + 1] -
            9 * f[i + 2] + f[i + 3]) /
           (60 * h);
  return d;
}

std::vector<double> second_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) fail(ErrorCode::internal, "second_derivative: need 5 samples");
  const double h2 = h * h;
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]) /
           (12 * h2);
  d[1] = (f[0] - 2 * f[1] + f[2]) / h2;
  d[n - 2] = (f[n - 3] - 2 * f[n - 2] + f[n - 1]) / h2;
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

std::vector<double> third_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 7) fail(ErrorCode::internal, "third_derivative: need 7 samples");
  const double h3 = h * h * h;
  for (std::size_t i = 3; i + 3 < n; ++i)
    d[i] = (f[i - 3] - 8 * f[i - 2] + 13 * f[i - 1] - 13 * f[i + 1] +
            8 * f[i + 2] - f[i + 3]) /
           (8 * h3);
  // O(h^2) five-point fallback at the margins
  for (std::size_t i : {std::size_t{2}, n - 3})
    d[i] = (f[i + 2] - 2 * f[i + 1] + 2 * f[i - 1] - f[i - 2]) / (2 * h3);
  d[0] = d[1] = d[2];
  d[n - 1] = d[n - 2] = d[n - 3];
  return d;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 6) fail(ErrorCode::internal, "cumulative_integral: need 6 samples");
  // quintic (sixth-order) per-interval weights; the first/last two intervals
  // use one-sided quintics through the six boundary samples
  constexpr double first[6] = {95.0 / 288, 1427.0 / 1440, -133.0 / 240,
                               241.0 / 720, -173.0 / 1440, 3.0 / 160};
  constexpr double second[6] = {-3.0 / 160, 637.0 / 1440, 511.0 / 720,
                                -43.0 / 240, 77.0 / 1440, -11.0 / 1440};
  constexpr double mid[6] = {11.0 / 1440, -31.0 / 480, 401.0 / 720,
                             401.0 / 720, -31.0 / 480, 11.0 / 1440};
  auto seg = [&](const double* w, std::size_t base) {
    double s = 0.0;
    for (int k = 0; k < 6; ++k) s += w[k] * f[base + std::size_t(k)];
    return h * s;
  };
  out[1] = seg(first, 0);
  out[2] = out[1] + seg(second, 0);
  for (std::size_t i = 2; i + 3 < n; ++i) out[i + 1] = out[i] + seg(mid, i - 2);
  if (n >= 6) {
    double rev_second[6], rev_first[6];
    for (int k = 0; k < 6; ++k) {
      rev_second[k] = second[5 - k];
      rev_first[k] = first[5 - k];
    }
    out[n - 2] = out[n - 3] + seg(rev_second, n - 6);
    out[n - 1] = out[n - 2] + seg(rev_first, n - 6);
  }
  return out;
}

double simpson(std::span<const double> f, double h) {
  return simpson(f, h, 0, f.size() - 1);
}

double simpson(std::span<const double> f, double h, std::size_t first,
               std::size_t last) {
  if (last <= first) return 0.0;
  std::size_t n = last - first;  // number of intervals
  double total = 0.0;
  if (n % 2 == 1) {  // peel one interval by trapezoid-corrected cubic
    total += h * (9 * f[last] + 19 * f[last - 1] - 5 * f[last - 2] +
                  f[last - 3]) /
             24.0;
    --last;
    n = last - first;
    if (n == 0) return total;
  }
  double s_end = f[first] + f[last];
  double s4 = 0.0, s2 = 0.0;
  for (std::size_t i = first + 1; i < last; i += 2) s4 += f[i];
  for (std::size_t i = first + 2; i < last; i += 2) s2 += f[i];
  total += h / 3.0 * (s_end + 4 * s4 + 2 * s2);
  return total;
}

double brent(const std::function<double(double)>& f, double a, double b,
             double rel_tol) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) fail(ErrorCode::bracket_not_found, "brent: no sign change");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2 * rel_tol * std::max(1.0, std::abs(b));
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r, s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (xm > 0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double rel_tol) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) fail(ErrorCode::bracket_not_found, "bisect: no sign change");
  for (int it = 0; it < 240; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm > 0) == (fa > 0)) { a = m; fa = fm; } else { b = m; }
    if (b - a <= rel_tol * std::max(1.0, std::abs(m))) break;
  }
  return 0.5 * (a + b);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double interp_poly(std::span<const double> xs, std::span<const double> ys,
                   double x) {
  std::vector<double> p(ys.begin(), ys.end());
  const std::size_t n = p.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i)
      p[i] = ((x - xs[i + k]) * p[i] + (xs[i] - x) * p[i + 1]) /
             (xs[i] - xs[i + k]);
  return p[0];
}

Pchip::Pchip(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n)
    fail(ErrorCode::internal, "Pchip: need matching xs/ys with >= 2 points");
  d_.assign(n, 0.0);
  std::vector<double> hseg(n - 1), slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    hseg[i] = xs_[i + 1] - xs_[i];
    if (hseg[i] <= 0) fail(ErrorCode::internal, "Pchip: xs not increasing");
    slope[i] = (ys_[i + 1] - ys_[i]) / hseg[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = slope[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2 * hseg[i] + hseg[i - 1];
      const double w2 = hseg[i] + 2 * hseg[i - 1];
      d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0) d = 0.0;
    else if (s0 * s1 <= 0 && std::abs(d) > 3 * std::abs(s0)) d = 3 * s0;
    return d;
  };
  d_[0] = end_slope(hseg[0], hseg[1], slope[0], slope[1]);
  d_[n - 1] = end_slope(hseg[n - 2], hseg[n - 3], slope[n - 2], slope[n - 3]);
}

std::size_t Pchip::interval(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0 : std::size_t(it - xs_.begin()) - 1;
  if (i + 1 >= xs_.size()) i = xs_.size() - 2;
  return i;
}

double Pchip::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * ys_[i] + h * h10 * d_[i] + h01 * ys_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double g00 = 6 * t * (t - 1) / h;
  const double g10 = (1 - t) * (1 - 3 * t);
  const double g01 = -6 * t * (t - 1) / h;
  const double g11 = t * (3 * t - 2);
  return g00 * ys_[i] + g10 * d_[i] + g01 * ys_[i + 1] + g11 * d_[i + 1];
}

}  // namespace milne::numerics
