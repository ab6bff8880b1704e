#include "radial/special_math.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "radial/parallel.hpp"
#include "radial/rng.hpp"

namespace radial {

namespace {

// Lanczos g=7, n=9 coefficient set (Godfrey's values, as used by Boost and
// Numerical Recipes 3rd ed.); relative error ~1e-15 for x >= 0.5.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_lanczos(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double series = kLanczos[0];
  for (int i = 1; i < 9; ++i) series += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) -
         t + std::log(series);
}

// Series expansion of P(a,x), converges fast for x < a + 1.
double gamma_p_series(double a, double x, double log_prefactor) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(log_prefactor);
}

// Modified Lentz continued fraction for Q(a,x); requires x >= a + 1.
double gamma_q_cf(double a, double x, double log_prefactor) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

double simpson_leaf(const std::function<double(double)>& f, double lo,
                    double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

// Subdivide at least kMinDepth levels before trusting the error estimate;
// narrow peaks (chi at large dof) are invisible to the first few probes.
constexpr int kMaxDepth = 60;
constexpr int kMinDepth = 11;

double simpson_recurse(const std::function<double(double)>& f, double lo,
                       double hi, double flo, double fmid, double fhi,
                       double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flm = f(lmid);
  const double frm = f(rmid);
  const double left = simpson_leaf(f, lo, mid, flo, flm, fmid);
  const double right = simpson_leaf(f, mid, hi, fmid, frm, fhi);
  const double delta = left + right - whole;
  const bool deep_enough = depth <= kMaxDepth - kMinDepth;
  if (depth <= 0 || (deep_enough && std::abs(delta) <= 15.0 * tol)) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, lo, mid, flo, flm, fmid, left, 0.5 * tol,
                         depth - 1) +
         simpson_recurse(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol,
                         depth - 1);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: requires x > 0");
  }
  if (x >= 0.5) return log_gamma_lanczos(x);
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
         log_gamma_lanczos(1.0 - x);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("regularized_gamma_p: a must be > 0");
  if (x < 0.0) throw std::domain_error("regularized_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double log_prefactor = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    return gamma_p_series(a, x, log_prefactor);
  }
  const double q = gamma_q_cf(a, x, log_prefactor);
  return 1.0 - q;
}

double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol) {
  const double mid = 0.5 * (lo + hi);
  const double flo = f(lo);
  const double fmid = f(mid);
  const double fhi = f(hi);
  const double whole = simpson_leaf(f, lo, hi, flo, fmid, fhi);
  return simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, tol, kMaxDepth);
}

ChiModel::ChiModel(std::size_t dof) : dof_(dof) {
  if (dof < 1) throw std::domain_error("ChiModel: dof must be >= 1");
  const double half_d = 0.5 * static_cast<double>(dof);
  log_norm_ = (half_d - 1.0) * std::numbers::ln2 + log_gamma(half_d);
}

double ChiModel::log_pdf(double r) const {
  if (!(r > 0.0)) throw std::domain_error("chi log_pdf: requires r > 0");
  const double d = static_cast<double>(dof_);
  return (d - 1.0) * std::log(r) - 0.5 * r * r - log_norm_;
}

double ChiModel::pdf(double r) const { return std::exp(log_pdf(r)); }

double ChiModel::cdf(double r) const {
  if (r < 0.0) throw std::domain_error("chi cdf: requires r >= 0");
  if (r == 0.0) return 0.0;
  return regularized_gamma_p(0.5 * static_cast<double>(dof_), 0.5 * r * r);
}

double ChiModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("chi quantile: requires p in (0,1)");
  }
  double lo = 1e-8;
  double hi = 10.0 * std::sqrt(static_cast<double>(dof_));
  // Bisection to a rough bracket, then Newton with the pdf as derivative.
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    r = 0.5 * (lo + hi);
    if (cdf(r) < p) {
      lo = r;
    } else {
      hi = r;
    }
    if (hi - lo < 1e-6 * (1.0 + r)) break;
  }
  for (int i = 0; i < 50; ++i) {
    const double err = cdf(r) - p;
    const double deriv = pdf(r);
    if (!(deriv > 0.0)) break;
    const double step = err / deriv;  // r-space error estimate
    if (std::abs(step) <= 5e-13 * r) break;
    double next = r - step;
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (cdf(next) < p) {
      lo = next;
    } else {
      hi = next;
    }
    r = next;
  }
  return r;
}

std::vector<double> ChiModel::sample(std::size_t n, std::uint64_t seed) const {
  std::vector<double> out;
  sample_into(out, n, seed);
  return out;
}

void ChiModel::sample_into(std::vector<double>& out, std::size_t n,
                           std::uint64_t seed) const {
  if (n == 0) throw std::invalid_argument("chi sample: n must be >= 1");
  out.resize(n);
  const std::size_t d = dof_;
  par::for_each(n, [&](std::size_t i) {
    Xoshiro256pp rng = stream_rng(seed, i);
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double g = rng.normal();
      sq += g * g;
    }
    out[i] = std::sqrt(sq);
  });
}

double ChiModel::mean() const {
  const double d = static_cast<double>(dof_);
  return std::numbers::sqrt2 *
         std::exp(log_gamma(0.5 * (d + 1.0)) - log_gamma(0.5 * d));
}

double ChiModel::variance() const {
  const double m = mean();
  return static_cast<double>(dof_) - m * m;
}

double ChiModel::entropy_reference() const {
  const double hi = 6.0 * std::sqrt(static_cast<double>(dof_)) + 12.0;
  const auto integrand = [this](double r) {
    if (r <= 0.0) return 0.0;
    const double lp = log_pdf(r);
    if (lp < -700.0) return 0.0;
    return -std::exp(lp) * lp;
  };
  return adaptive_simpson(integrand, 1e-12, hi, 1e-9);
}

}  // namespace radial
