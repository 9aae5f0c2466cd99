#pragma once

// Test-only reference implementations, independent of the library's
// evaluation paths.
//
//   * ml_reference: Mittag-Leffler series summed in MPFR with escalating
//     precision until two rounds agree; no asymptotic expansion, no method
//     selection.  Practical for |z| up to a few hundred.
//   * tanh_sinh: double-exponential quadrature for integrands with endpoint
//     singularities, used as the reference integrator.

#include <cmath>
#include <functional>
#include <stdexcept>

#include <mpfr.h>

namespace oracles {

namespace detail {

struct Mp {
  mpfr_t v;
  explicit Mp(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
};

inline double ml_series_at(double a, double b, double mu, double z, mpfr_prec_t prec,
                           long max_terms) {
  Mp am(prec), bm(prec), mm(prec), zm(prec), zn(prec), poch(prec), arg(prec), g(prec),
      t(prec), s(prec), tmp(prec);
  mpfr_set_d(am.v, a, MPFR_RNDN);
  mpfr_set_d(bm.v, b, MPFR_RNDN);
  mpfr_set_d(mm.v, mu, MPFR_RNDN);
  mpfr_set_d(zm.v, z, MPFR_RNDN);
  mpfr_set_ui(zn.v, 1, MPFR_RNDN);
  mpfr_set_ui(poch.v, 1, MPFR_RNDN);
  mpfr_set_ui(s.v, 0, MPFR_RNDN);
  mpfr_exp_t emax = -100000000;
  for (long n = 0; n < max_terms; ++n) {
    mpfr_mul_ui(arg.v, am.v, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_add(arg.v, arg.v, bm.v, MPFR_RNDN);
    mpfr_gamma(g.v, arg.v, MPFR_RNDN);
    if (!mpfr_nan_p(g.v) && !mpfr_zero_p(g.v)) {
      mpfr_mul(t.v, zn.v, poch.v, MPFR_RNDN);
      mpfr_div(t.v, t.v, g.v, MPFR_RNDN);
      mpfr_add(s.v, s.v, t.v, MPFR_RNDN);
      if (!mpfr_zero_p(t.v)) {
        const mpfr_exp_t e = mpfr_get_exp(t.v);
        if (e > emax) emax = e;
        if (n > 6 && emax - e > static_cast<mpfr_exp_t>(prec) + 24) break;
      }
    }
    mpfr_mul(zn.v, zn.v, zm.v, MPFR_RNDN);
    mpfr_add_ui(tmp.v, mm.v, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_mul(poch.v, poch.v, tmp.v, MPFR_RNDN);
    mpfr_div_ui(poch.v, poch.v, static_cast<unsigned long>(n) + 1, MPFR_RNDN);
  }
  return mpfr_get_d(s.v, MPFR_RNDN);
}

}  // namespace detail

// Escalate precision until two rounds agree to ~1e-14 relative.  A round
// whose partial sums were dominated by cancellation garbage shows up as a
// non-finite or wildly different value and forces further escalation.
inline double ml_reference(double a, double b, double z, double mu = 1.0) {
  double prev = detail::ml_series_at(a, b, mu, z, 256, 4000000);
  for (mpfr_prec_t p = 512; p <= 32768; p *= 2) {
    const double cur = detail::ml_series_at(a, b, mu, z, p, 4000000);
    if (std::isfinite(cur) && std::isfinite(prev) &&
        std::fabs(cur - prev) <= 1e-14 * (std::fabs(cur) + 1e-300))
      return cur;
    prev = cur;
  }
  throw std::runtime_error("ml_reference: no convergence");
}

// Tanh-sinh quadrature of f over (lo, hi); integrable endpoint singularities
// are fine.  Levels halve the step until successive results agree to tol.
inline double tanh_sinh(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-13) {
  const double c = 0.5 * (hi - lo);
  const double d = 0.5 * (hi + lo);
  const double pi_half = 1.5707963267948966;
  const double t_max = 6.9;
  auto sample = [&](double t) -> double {
    const double sh = std::sinh(t);
    const double u = std::tanh(pi_half * sh);
    const double x = d + c * u;
    if (x <= lo || x >= hi) return 0.0;
    const double ch = std::cosh(pi_half * sh);
    const double w = pi_half * std::cosh(t) / (ch * ch);
    return f(x) * w;
  };
  double h = 1.0;
  double accum = sample(0.0);
  for (double t = h; t < t_max; t += h) accum += sample(t) + sample(-t);
  double prev = c * h * accum;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    for (double t = h; t < t_max; t += 2.0 * h) accum += sample(t) + sample(-t);
    const double total = c * h * accum;
    if (level >= 4 && std::fabs(total - prev) <= tol * (std::fabs(total) + 1e-300))
      return total;
    prev = total;
  }
  return prev;
}

}  // namespace oracles
