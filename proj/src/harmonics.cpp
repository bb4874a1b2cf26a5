#include "fcav/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fcav {

namespace {

// Coefficients of the Legendre polynomial P_l(t), index = power of t.
std::vector<double> legendre_coeffs(int l) {
  std::vector<double> pm1 = {1.0};      // P_0
  if (l == 0) return pm1;
  std::vector<double> p = {0.0, 1.0};   // P_1
  for (int n = 1; n < l; ++n) {
    // (n+1) P_{n+1} = (2n+1) t P_n - n P_{n-1}
    std::vector<double> nxt(n + 2, 0.0);
    for (int k = 0; k <= n; ++k) nxt[k + 1] += (2.0 * n + 1.0) * p[k] / (n + 1.0);
    for (int k = 0; k < static_cast<int>(pm1.size()); ++k)
      nxt[k] -= n * pm1[k] / (n + 1.0);
    pm1 = std::move(p);
    p = std::move(nxt);
  }
  return p;
}

std::vector<double> differentiate(std::vector<double> c, int times) {
  for (int t = 0; t < times; ++t) {
    if (c.size() <= 1) return {};
    std::vector<double> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    c = std::move(d);
  }
  return c;
}

// Re[(x+iy)^m] (cos) or Im[(x+iy)^m] (sin), homogeneous of degree m.
Poly3 sectoral(int m, bool cosine) {
  std::vector<Poly3::Term> terms;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    // i^j contributes to Re for j even, Im for j odd, sign (-1)^(j/2) resp (-1)^((j-1)/2)
    if (cosine == (j % 2 == 0)) {
      double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
      terms.push_back({m - j, j, 0, sign * binom});
    }
    binom = binom * (m - j) / (j + 1.0);
  }
  return Poly3::from_terms(std::move(terms));
}

double factorial_ratio(int lo, int hi) {  // hi! / lo!
  double r = 1.0;
  for (int k = lo + 1; k <= hi; ++k) r *= k;
  return r;
}

} // namespace

Poly3 real_solid_harmonic(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("real_solid_harmonic: bad (l,m)");
  const int ma = std::abs(m);

  // P_l^ma(cos th) = sin^ma(th) * G(cos th) with G = d^ma P_l / dt^ma.
  // r^l P_l^ma(cos th) * {cos,sin}(ma phi) =
  //   sectoral_ma(x,y) * sum_k g_k z^k (x^2+y^2+z^2)^((l-ma-k)/2),
  // where only k with l-ma-k even survive (Legendre-derivative parity).
  const std::vector<double> g = differentiate(legendre_coeffs(l), ma);

  const Poly3 r2 = Poly3::monomial(2, 0, 0, 1.0) + Poly3::monomial(0, 2, 0, 1.0) +
                   Poly3::monomial(0, 0, 2, 1.0);
  Poly3 q;  // r^(l-ma) G(z/r)
  for (int k = 0; k < static_cast<int>(g.size()); ++k) {
    if (g[k] == 0.0) continue;
    int rexp = l - ma - k;
    if (rexp % 2 != 0) continue;  // parity: these coefficients are zero anyway
    Poly3 term = Poly3::monomial(0, 0, k, g[k]);
    for (int h = 0; h < rexp / 2; ++h) term = term * r2;
    q += term;
  }

  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) /
                                factorial_ratio(l - ma, l + ma));
  if (m == 0) return q * norm;
  const Poly3 ang = sectoral(ma, m > 0);
  return ang * q * (norm * std::numbers::sqrt2);
}

} // namespace fcav
