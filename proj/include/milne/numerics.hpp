#ifndef MILNE_NUMERICS_HPP
#define MILNE_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace milne::numerics {

// Centered finite-difference stencils on a uniform grid. First and second
// derivatives are O(h^4); the third derivative (7-point) is O(h^4) as well.
// The two cells nearest each end fall back to lower-order one-sided forms.
std::vector<double> derivative(std::span<const double> f, double h);
std::vector<double> derivative_o2(std::span<const double> f, double h);
/// Seven-point first derivative, O(h^6) in the interior.
std::vector<double> derivative_o6(std::span<const double> f, double h);
std::vector<double> second_derivative(std::span<const double> f, double h);
std::vector<double> third_derivative(std::span<const double> f, double h);

/// Cumulative integral of uniformly sampled data, exact for quintics
/// (sixth order). result[0] = 0.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

/// Composite Simpson rule; requires an odd number of samples.
double simpson(std::span<const double> f, double h);

double simpson(std::span<const double> f, double h, std::size_t first,
               std::size_t last);

/// Brent root bracketing refinement. f(a) and f(b) must differ in sign.
double brent(const std::function<double(double)>& f, double a, double b,
             double rel_tol);

/// Plain bisection to the requested relative tolerance; used as an
/// independent oracle companion to brent().
double bisect(const std::function<double(double)>& f, double a, double b,
              double rel_tol);

/// Golden-section minimizer for a unimodal function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol);

/// Value of the local polynomial through six consecutive samples,
/// evaluated at x (Neville's scheme). xs need not be uniform.
double interp_poly(std::span<const double> xs, std::span<const double> ys,
                   double x);

/// Shape-preserving (Fritsch-Carlson) monotone cubic interpolant.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_front() const { return xs_.front(); }
  double x_back() const { return xs_.back(); }

 private:
  std::size_t interval(double x) const;
  std::vector<double> xs_, ys_, d_;
};

}  // namespace milne::numerics

#endif
