#pragma once

// Planar kernel family in the z, z̄ basis: complex decomposition, exact
// circle moments, the alternating binomial sum and its generating function,
// and the disc integral of (ω̄-ξ̄)^{n-1}/(ω-ξ)^n.
//
// Indexing here follows degree 2n-1 (so n = k+1 against the rest of the
// library).

#include <gmpxx.h>

#include <complex>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polyharm.hpp"
#include "quad.hpp"

namespace harmcantor {

struct ComplexRational {
  mpq_class re = 0;
  mpq_class im = 0;

  ComplexRational() = default;
  ComplexRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}
  bool is_zero() const { return re == 0 && im == 0; }
  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const ComplexRational& o) const { return re == o.re && im == o.im; }
  std::string to_string() const { return "(" + re.get_str() + ") + (" + im.get_str() + ")i"; }
};

/// Σ c_{pq} z^p z̄^q.
using ZPolynomial = std::map<std::pair<int, int>, ComplexRational>;

struct ComplexKernelDecomp {
  int n = 0;
  /// A[j-1], B[j-1] for j = 1..n: coefficient of z^{2j-1}|z|^{2(n-j)} and z̄^{2j-1}|z|^{2(n-j)}.
  std::vector<ComplexRational> A;
  std::vector<ComplexRational> B;
  bool admissible = false;  ///< A_1 = B_1 = 0
};

namespace detail {

inline ZPolynomial zmul(const ZPolynomial& a, const ZPolynomial& b) {
  ZPolynomial out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

inline ZPolynomial zpow(const ZPolynomial& a, int e) {
  ZPolynomial out{{{0, 0}, ComplexRational(1)}};
  for (int i = 0; i < e; ++i) out = zmul(out, a);
  return out;
}

/// x = (z + z̄)/2, y = (z - z̄)/(2i) = -i(z - z̄)/2.
inline ZPolynomial to_z_basis(const HomogeneousPolynomial& p) {
  const ZPolynomial zx{{{1, 0}, ComplexRational(mpq_class(1, 2))}, {{0, 1}, ComplexRational(mpq_class(1, 2))}};
  const ZPolynomial zy{{{1, 0}, ComplexRational(0, mpq_class(-1, 2))}, {{0, 1}, ComplexRational(0, mpq_class(1, 2))}};
  ZPolynomial out;
  for (const auto& [e, c] : p.terms()) {
    for (const auto& [ez, cz] : zmul(zpow(zx, e[0]), zpow(zy, e[1]))) out[ez] += ComplexRational(c) * cz;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

/// Back to x, y with z = x + iy, z̄ = x - iy; returns (real part, imaginary part).
inline std::pair<HomogeneousPolynomial, HomogeneousPolynomial> from_z_basis(const ZPolynomial& zp, int degree) {
  // Expand in a map keyed by (a, b) for x^a y^b with complex coefficients.
  std::map<std::pair<int, int>, ComplexRational> xy;
  auto binom = [](int n, int k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return mpq_class(b);
  };
  auto ipow = [](int e, int sign) {  // (sign·i)^e
    static const ComplexRational units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    int k = e % 4;
    if (sign < 0) k = (4 - k) % 4;
    return units[k];
  };
  for (const auto& [e, c] : zp) {
    const auto [p, q] = e;
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= q; ++b) {
        // z^p: C(p,a) x^a (iy)^{p-a}; z̄^q: C(q,b) x^b (-iy)^{q-b}
        const ComplexRational f = ComplexRational(binom(p, a) * binom(q, b)) * ipow(p - a, 1) * ipow(q - b, -1);
        xy[{a + b, p + q - a - b}] += c * f;
      }
  }
  HomogeneousPolynomial re(2, degree), im(2, degree);
  for (const auto& [e, c] : xy) {
    re.add_term({e.first, e.second}, c.re);
    im.add_term({e.first, e.second}, c.im);
  }
  return {re, im};
}

}  // namespace detail

/// Blocks A_j z^{2j-1} + B_j z̄^{2j-1} times |z|^{2(n-j)}: z^p z̄^q with p > q
/// is z^{p-q}|z|^{2q}.
inline ComplexKernelDecomp complex_decompose(const HomogeneousPolynomial& p) {
  if (p.dim() != 2) throw std::invalid_argument("complex_decompose: two variables required");
  if (p.degree() % 2 == 0) throw std::invalid_argument("complex_decompose: odd degree required");
  ComplexKernelDecomp out;
  out.n = (p.degree() + 1) / 2;
  out.A.assign(out.n, ComplexRational());
  out.B.assign(out.n, ComplexRational());
  for (const auto& [e, c] : detail::to_z_basis(p)) {
    const auto [a, b] = e;
    const int j = (std::abs(a - b) + 1) / 2;
    (a > b ? out.A : out.B)[j - 1] += c;
  }
  out.admissible = out.A[0].is_zero() && out.B[0].is_zero();
  return out;
}

/// Σ_j (A_j z^{2j-1} + B_j z̄^{2j-1}) |z|^{2(n-j)} in x, y; throws if the
/// imaginary part does not vanish.
inline HomogeneousPolynomial reassemble(const ComplexKernelDecomp& d) {
  ZPolynomial zp;
  for (int j = 1; j <= d.n; ++j) {
    if (!d.A[j - 1].is_zero()) zp[{2 * j - 1 + d.n - j, d.n - j}] += d.A[j - 1];
    if (!d.B[j - 1].is_zero()) zp[{d.n - j, 2 * j - 1 + d.n - j}] += d.B[j - 1];
  }
  auto [re, im] = detail::from_z_basis(zp, 2 * d.n - 1);
  if (!im.is_zero()) throw std::logic_error("complex decomposition does not reassemble to a real polynomial");
  return re;
}

/// ∫_{|ξ|=t} ξ̄^k ξ^l dm_1(ξ) = π · coefficient, through cos/sin expansion
/// and ∫_0^{2π} cos^a sin^b = 2π (a-1)!!(b-1)!!/(a+b)!! for even a, b.
inline ComplexRational circle_moment(int k, int l, const mpq_class& t) {
  if (k < 0 || l < 0) throw std::invalid_argument("circle_moment: k, l >= 0");
  if (t <= 0) throw std::invalid_argument("circle_moment: t > 0");
  // ξ = t(c + is), ξ̄ = t(c - is): expand as a polynomial in c, s.
  std::map<std::pair<int, int>, ComplexRational> cs{{{0, 0}, ComplexRational(1)}};
  auto times = [&](int sign) {
    std::map<std::pair<int, int>, ComplexRational> next;
    for (const auto& [e, c] : cs) {
      next[{e.first + 1, e.second}] += c;
      next[{e.first, e.second + 1}] += c * ComplexRational(0, sign);
    }
    cs = std::move(next);
  };
  for (int i = 0; i < k; ++i) times(-1);
  for (int i = 0; i < l; ++i) times(1);
  auto dfact = [](int n) {
    mpz_class f = 1;
    for (int i = n; i > 1; i -= 2) f *= i;
    return f;
  };
  ComplexRational total;
  for (const auto& [e, c] : cs) {
    const auto [a, b] = e;
    if (a % 2 || b % 2) continue;
    mpq_class w(2 * dfact(a - 1) * dfact(b - 1), dfact(a + b));
    w.canonicalize();
    total += c * ComplexRational(w);
  }
  // t^{k+l} from ξ, ξ̄ and t from arc length.
  mpq_class tp = 1;
  for (int i = 0; i < k + l + 1; ++i) tp *= t;
  total.re *= tp;
  total.im *= tp;
  return total;
}

/// Σ_{k=0}^{n-1} (-1)^k (k+n-1)(k+n-2)...(k+2) / (k!(n-1-k)!), empty product = 1.
inline mpq_class combinatorial_term(int n, int k) {
  mpz_class num = 1;
  for (int i = 2; i <= n - 1; ++i) num *= k + i;
  mpz_class fk, fr;
  mpz_fac_ui(fk.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_fac_ui(fr.get_mpz_t(), static_cast<unsigned long>(n - 1 - k));
  mpq_class t(num, fk * fr);
  t.canonicalize();
  return k % 2 ? mpq_class(-t) : t;
}

inline mpq_class combinatorial_sum(int n) {
  if (n < 2) throw std::invalid_argument("combinatorial_sum: n >= 2");
  mpq_class s = 0;
  for (int k = 0; k <= n - 1; ++k) s += combinatorial_term(n, k);
  return s;
}

/// Univariate polynomial, coefficient i of x^i.
using UPoly = std::vector<mpq_class>;

inline UPoly upoly_derivative(const UPoly& p) {
  UPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  return out;
}

inline mpq_class upoly_eval(const UPoly& p, const mpq_class& x) {
  mpq_class s = 0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * x + p[i];
  return s;
}

struct GenFunctionReport {
  int n = 0;
  UPoly G;            ///< f^{(n-2)}
  mpq_class G_at_1;
  bool coefficients_match = false;  ///< x^{k+1} coefficient equals the k-th summand, every other coefficient 0
  int degree = 0;
};

/// f(x) = x^{n-1}(1-x)^{n-1}/(n-1)!, G = f^{(n-2)}.
inline GenFunctionReport gen_function_check(int n) {
  if (n < 2) throw std::invalid_argument("gen_function_check: n >= 2");
  GenFunctionReport rep;
  rep.n = n;
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n - 1));
  UPoly f(2 * n - 1, 0);
  for (int j = 0; j <= n - 1; ++j) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n - 1), static_cast<unsigned long>(j));
    mpq_class c(b, fact);
    c.canonicalize();
    f[n - 1 + j] = j % 2 ? mpq_class(-c) : c;
  }
  UPoly g = f;
  for (int i = 0; i < n - 2; ++i) g = upoly_derivative(g);
  while (!g.empty() && g.back() == 0) g.pop_back();
  rep.G = g;
  rep.degree = static_cast<int>(g.size()) - 1;
  rep.G_at_1 = upoly_eval(g, 1);
  bool match = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int k = static_cast<int>(i) - 1;
    const mpq_class expect = (k >= 0 && k <= n - 1) ? combinatorial_term(n, k) : mpq_class(0);
    match = match && g[i] == expect;
  }
  rep.coefficients_match = match && rep.degree == n;
  return rep;
}

struct DiscReport {
  int n = 0;
  std::complex<double> omega;
  /// Exact path: the value is 2 S ω̄^n ω^{1-n} (normalized measure) with
  /// S = Σ_i (-1)^i C(n-1,i) C(n-1+i,i) / (2(i+1)); exactly 0 when ω = 0.
  mpq_class S;
  bool S_matches_sum = false;  ///< S = combinatorial_sum(n)/2
  bool exact_zero = false;
  /// Numeric path: polar reduction on the real and imaginary parts.
  QuadratureEstimate numeric_re;
  QuadratureEstimate numeric_im;
  double numeric_residual() const { return std::max(std::abs(numeric_re.value), std::abs(numeric_im.value)); }
};

/// ∫_{B(0,1)} (ω̄-ξ̄)^{n-1}/(ω-ξ)^n dm_2(ξ). With u = ω - ξ the integrand is
/// ū^{2n-1}/|u|^{2n}, i.e. the kernels Re(z^{2n-1}) and -Im(z^{2n-1}).
///
/// Exact path: for |ξ| > |ω| the series in ω/ξ has no term with a nonzero
/// circle moment; for |ξ| < |ω| only the diagonal terms of
/// Σ_i C(n-1,i) ω̄^{n-1-i}(-ξ̄)^i · Σ_j C(n-1+j,j) ξ^j/ω^{n+j} survive, each
/// giving 2π t^{2i+1}.
inline DiscReport disc_reflectionless_2d(int n, std::complex<double> omega, int max_nodes = 1 << 16) {
  if (n < 2) throw std::invalid_argument("disc_reflectionless_2d: n >= 2");
  if (!(std::abs(omega) < 1.0)) throw std::domain_error("disc_reflectionless_2d: |omega| < 1 required");
  DiscReport rep;
  rep.n = n;
  rep.omega = omega;
  const mpq_class t = 1;
  mpq_class S = 0;
  for (int i = 0; i <= n - 1; ++i) {
    mpz_class b1, b2;
    mpz_bin_uiui(b1.get_mpz_t(), n - 1, i);
    mpz_bin_uiui(b2.get_mpz_t(), n - 1 + i, i);
    // Moment of ξ̄^i ξ^i on |ξ| = t, divided by π, is 2 t^{2i+1}; the radial
    // integral ∫_0^{|ω|} t^{2i+1} dt contributes |ω|^{2i+2}/(2i+2) and merges
    // into ω̄^n ω^{1-n}.
    const ComplexRational mom = circle_moment(i, i, t);
    mpq_class term = mpq_class(b1 * b2) * mom.re / 2 / (2 * (i + 1));
    if (i % 2) term = -term;
    S += term;
  }
  rep.S = S;
  rep.S_matches_sum = S == combinatorial_sum(n) / 2;
  rep.exact_zero = omega == 0.0 || S == 0;

  const auto re = KernelSpec(complex_power_part(2 * n - 1, true), n - 1, "d2.re" + std::to_string(2 * n - 1));
  const auto im = KernelSpec(-complex_power_part(2 * n - 1, false), n - 1, "-d2.im" + std::to_string(2 * n - 1));
  const Ball<2> disc(Point<2>{0, 0}, 1.0);
  const Point<2> x{omega.real(), omega.imag()};
  rep.numeric_re = reflectionless_residual<2>(re, disc, x, 1e-14, max_nodes);
  rep.numeric_im = reflectionless_residual<2>(im, disc, x, 1e-14, max_nodes);
  return rep;
}

/// n, combinatorial_sum, G_at_1, max_numeric_residual.
inline void write_appendix_csv(std::ostream& os, const std::vector<std::tuple<int, mpq_class, mpq_class, double>>& rows) {
  os << "n,combinatorial_sum,G_at_1,max_numeric_residual\n";
  char buf[64];
  for (const auto& [n, s, g, r] : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r);
    os << n << ',' << s.get_str() << ',' << g.get_str() << ',' << buf << '\n';
  }
}

}  // namespace harmcantor
