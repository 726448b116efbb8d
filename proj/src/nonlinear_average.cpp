#include "lens/nonlinear_average.hpp"

#include <cmath>
#include <stdexcept>

namespace lens {

namespace {

double balance_integral(const RadialField& w, double c, double p) {
  return (w.grid->volume_weights * signed_power(w.values + c, p)).sum();
}

}  // namespace

RecenterResult cp(const RadialField& w, double p, double tol) {
  if (!(p > 0.0)) throw std::invalid_argument("cp: p must be > 0");
  require_finite(w, "cp");

  double lo = -w.values.maxCoeff();
  double hi = -w.values.minCoeff();
  RecenterResult result;
  if (lo == hi) {  // constant field: w + c == 0
    result.shift = lo;
    result.residual = 0.0;
    return result;
  }

  // g(lo) <= 0 <= g(hi) since w + lo <= 0 <= w + hi pointwise.
  const double scale = w.grid->domain.measure();
  auto g = [&](double c) { return balance_integral(w, c, p); };
  auto tolerance = [&](double c) {
    const double norm = lq_norm(make_field(w.grid, w.values + c), p + 1.0);
    return tol * std::pow(norm, p) * scale;
  };

  double c = 0.5 * (lo + hi);
  int it = 0;
  for (; it < 200; ++it) {
    c = 0.5 * (lo + hi);
    const double gc = g(c);
    if (std::abs(gc) <= tolerance(c)) break;
    if (gc <= 0.0)
      lo = c;
    else
      hi = c;
    if (hi - lo <= 1e-16 * (1.0 + std::abs(c))) break;
  }

  if (p >= 1.0) {  // secant polish on the bisection endpoint pair
    double c0 = lo, c1 = hi;
    double g0 = g(c0), g1 = g(c1);
    for (int k = 0; k < 8 && g1 != g0; ++k) {
      const double cn = c1 - g1 * (c1 - c0) / (g1 - g0);
      if (!(cn >= lo && cn <= hi)) break;
      c0 = c1;
      g0 = g1;
      c1 = cn;
      g1 = g(c1);
      ++it;
      if (std::abs(g1) <= tolerance(c1)) break;
    }
    if (std::abs(g1) < std::abs(g(c))) c = c1;
  }

  result.shift = c;
  result.residual = g(c);
  result.iterations = it;

  // minimizing-property probe (Lemma: ||w+c||_{p+1} is minimal at c)
  const double here = lq_norm(make_field(w.grid, w.values + c), p + 1.0);
  const double delta = 1e-4 * (std::abs(c) + w.values.abs().maxCoeff() + 1.0);
  const double up = lq_norm(make_field(w.grid, w.values + (c + delta)), p + 1.0);
  const double dn = lq_norm(make_field(w.grid, w.values + (c - delta)), p + 1.0);
  if (here > up + 1e-9 * (1.0 + here) || here > dn + 1e-9 * (1.0 + here))
    throw std::runtime_error("cp: recentered norm is not minimal; root finding failed");
  return result;
}

RadialField recenter(const RadialField& w, double p, double tol) {
  const RecenterResult r = cp(w, p, tol);
  return make_field(w.grid, w.values + r.shift);
}

SignBalance sign_balance(const RadialField& u, double zero_band) {
  if (zero_band < 0.0) throw std::invalid_argument("sign_balance: band must be >= 0");
  SignBalance out;
  const auto& vw = u.grid->volume_weights;
  for (int i = 0; i < u.size(); ++i) {
    const double v = u.values(i);
    if (std::abs(v) <= zero_band)
      out.zero += vw(i);
    else if (v > 0.0)
      out.positive += vw(i);
    else
      out.negative += vw(i);
  }
  out.balanced = std::abs(out.positive - out.negative) <= out.zero + 1e-12 * u.grid->domain.measure();
  return out;
}

}  // namespace lens
