#pragma once

// Exact homogeneous polynomial algebra over Q, harmonic kernels
// K(x) = P(x)/|x|^{d+2k} and the spherical-harmonic decomposition.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace harmcantor {

using Exponent = std::vector<int>;

/// Graded lexicographic order, larger monomials first (x^3 before x^2 y).
struct GradedLexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = std::accumulate(a.begin(), a.end(), 0);
    const int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

/// All exponent vectors of total degree `degree` in `dim` variables,
/// graded-lex descending.
inline std::vector<Exponent> monomial_basis(int dim, int degree) {
  std::vector<Exponent> out;
  if (degree < 0) return out;
  Exponent e(dim, 0);
  // Recursive fill, first variable takes the largest power first.
  auto fill = [&](auto&& self, int var, int left) -> void {
    if (var == dim - 1) {
      e[var] = left;
      out.push_back(e);
      return;
    }
    for (int p = left; p >= 0; --p) {
      e[var] = p;
      self(self, var + 1, left - p);
    }
  };
  fill(fill, 0, degree);
  return out;
}

class HomogeneousPolynomial {
 public:
  using Terms = std::map<Exponent, mpq_class, GradedLexGreater>;

  /// The zero polynomial of the given (nominal) degree.
  HomogeneousPolynomial(int dim, int degree) : dim_(dim), degree_(std::max(degree, 0)) {
    if (dim < 2) throw std::invalid_argument("polynomial dimension must be >= 2");
  }

  static HomogeneousPolynomial monomial(int dim, const Exponent& e, const mpq_class& c = 1) {
    if (static_cast<int>(e.size()) != dim) throw std::invalid_argument("exponent length != dimension");
    HomogeneousPolynomial p(dim, std::accumulate(e.begin(), e.end(), 0));
    p.add_term(e, c);
    return p;
  }

  /// |x|^{2j}
  static HomogeneousPolynomial norm_power(int dim, int j) {
    HomogeneousPolynomial sq(dim, 2);
    for (int i = 0; i < dim; ++i) {
      Exponent e(dim, 0);
      e[i] = 2;
      sq.add_term(e, 1);
    }
    HomogeneousPolynomial out = monomial(dim, Exponent(dim, 0));
    for (int i = 0; i < j; ++i) out = out * sq;
    return out;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  mpq_class coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? mpq_class(0) : it->second;
  }

  /// Adds c x^e; keeps canonical form (no zero coefficients).
  void add_term(const Exponent& e, mpq_class c) {
    c.canonicalize();  // callers may pass mpq_class(num, den) with a common factor
    if (static_cast<int>(e.size()) != dim_) throw std::invalid_argument("exponent length != dimension");
    const int deg = std::accumulate(e.begin(), e.end(), 0);
    if (std::any_of(e.begin(), e.end(), [](int v) { return v < 0; }))
      throw std::invalid_argument("negative exponent");
    if (c == 0) return;
    if (terms_.empty()) {
      degree_ = deg;
    } else if (deg != degree_) {
      throw std::invalid_argument("term degree breaks homogeneity");
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  HomogeneousPolynomial operator-() const {
    HomogeneousPolynomial out(*this);
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& o) {
    check_dim(o);
    if (!is_zero() && !o.is_zero() && degree_ != o.degree_)
      throw std::invalid_argument("adding polynomials of different degree");
    if (is_zero()) degree_ = o.degree_;
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  HomogeneousPolynomial& operator-=(const HomogeneousPolynomial& o) { return *this += -o; }
  HomogeneousPolynomial& operator*=(const mpq_class& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend HomogeneousPolynomial operator+(HomogeneousPolynomial a, const HomogeneousPolynomial& b) { return a += b; }
  friend HomogeneousPolynomial operator-(HomogeneousPolynomial a, const HomogeneousPolynomial& b) { return a -= b; }
  friend HomogeneousPolynomial operator*(HomogeneousPolynomial a, const mpq_class& s) { return a *= s; }
  friend HomogeneousPolynomial operator*(const mpq_class& s, HomogeneousPolynomial a) { return a *= s; }

  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    a.check_dim(b);
    HomogeneousPolynomial out(a.dim_, a.degree_ + b.degree_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (int i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  /// Equality of the represented polynomials; nominal degree of zero is ignored.
  friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  HomogeneousPolynomial derivative(int var) const {
    if (var < 0 || var >= dim_) throw std::invalid_argument("derivative variable out of range");
    HomogeneousPolynomial out(dim_, degree_ - 1);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent f = e;
      f[var] -= 1;
      out.add_term(f, c * e[var]);
    }
    return out;
  }

  mpq_class operator()(std::span<const mpq_class> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("evaluation point has wrong dimension");
    mpq_class sum = 0;
    for (const auto& [e, c] : terms_) {
      mpq_class t = c;
      for (int i = 0; i < dim_; ++i)
        for (int p = 0; p < e[i]; ++p) t *= x[i];
      sum += t;
    }
    return sum;
  }

  /// Floating-point evaluation.
  double evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("evaluation point has wrong dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c.get_d();
      for (int i = 0; i < dim_; ++i) t *= std::pow(x[i], e[i]);
      sum += t;
    }
    return sum;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    static const char* names[] = {"x", "y", "z", "w"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      first = false;
      mpq_class a = abs(c);
      bool constant = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
      if (a != 1 || constant) os << a.get_str();
      for (int i = 0; i < dim_; ++i) {
        if (e[i] == 0) continue;
        if (dim_ <= 4)
          os << names[i];
        else
          os << "x" << i + 1;
        if (e[i] > 1) os << "^" << e[i];
      }
    }
    return os.str();
  }

 private:
  void check_dim(const HomogeneousPolynomial& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  }

  int dim_;
  int degree_;
  Terms terms_;
};

inline mpq_class poly_eval(const HomogeneousPolynomial& p, std::span<const mpq_class> x) { return p(x); }
inline double poly_eval(const HomogeneousPolynomial& p, std::span<const double> x) { return p.evaluate(x); }

inline HomogeneousPolynomial laplacian(const HomogeneousPolynomial& p) {
  HomogeneousPolynomial out(p.dim(), p.degree() - 2);
  for (int i = 0; i < p.dim(); ++i) {
    Exponent f;
    for (const auto& [e, c] : p.terms()) {
      if (e[i] < 2) continue;
      f = e;
      f[i] -= 2;
      out.add_term(f, c * e[i] * (e[i] - 1));
    }
  }
  return out;
}

/// p(∂) q: every monomial c x^a of p acts as c ∂^a.
inline HomogeneousPolynomial apply_diff_operator(const HomogeneousPolynomial& p, const HomogeneousPolynomial& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("polynomial dimension mismatch");
  const int d = p.dim();
  HomogeneousPolynomial out(d, q.degree() - p.degree());
  if (q.degree() < p.degree()) return out;
  Exponent diff(d);
  for (const auto& [a, ca] : p.terms()) {
    for (const auto& [b, cb] : q.terms()) {
      mpz_class factor = 1;
      bool ok = true;
      for (int i = 0; i < d && ok; ++i) {
        if (b[i] < a[i]) {
          ok = false;
          break;
        }
        diff[i] = b[i] - a[i];
        for (int t = b[i]; t > diff[i]; --t) factor *= t;
      }
      if (ok) out.add_term(diff, ca * cb * mpq_class(factor));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact dense linear algebra over Q, used by the harmonic decomposition.

namespace detail {

class RationalLU {
 public:
  explicit RationalLU(std::vector<mpq_class> a, std::size_t n) : n_(n), lu_(std::move(a)), perm_(n) {
    std::iota(perm_.begin(), perm_.end(), 0);
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      while (piv < n_ && at(piv, col) == 0) ++piv;
      if (piv == n_) throw std::logic_error("singular system in harmonic decomposition");
      if (piv != col) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(at(piv, j), at(col, j));
        std::swap(perm_[piv], perm_[col]);
      }
      for (std::size_t r = col + 1; r < n_; ++r) {
        if (at(r, col) == 0) continue;
        at(r, col) /= at(col, col);
        const mpq_class f = at(r, col);
        for (std::size_t j = col + 1; j < n_; ++j)
          if (at(col, j) != 0) at(r, j) -= f * at(col, j);
      }
    }
  }

  std::vector<mpq_class> solve(const std::vector<mpq_class>& b) const {
    std::vector<mpq_class> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      y[i] = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j)
        if (at(i, j) != 0) y[i] -= at(i, j) * y[j];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j)
        if (at(i, j) != 0) y[i] -= at(i, j) * y[j];
      y[i] /= at(i, i);
    }
    return y;
  }

 private:
  mpq_class& at(std::size_t r, std::size_t c) { return lu_[r * n_ + c]; }
  const mpq_class& at(std::size_t r, std::size_t c) const { return lu_[r * n_ + c]; }

  std::size_t n_;
  std::vector<mpq_class> lu_;
  std::vector<std::size_t> perm_;
};

/// Factorization of f ↦ Δ(|x|^2 f) on degree-`degree` polynomials in `dim`
/// variables, cached per (dim, degree).
struct LiftOperator {
  std::vector<Exponent> basis;
  std::map<Exponent, std::size_t, GradedLexGreater> index;
  std::unique_ptr<RationalLU> lu;
};

inline const LiftOperator& lift_operator(int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<LiftOperator>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, degree}];
  if (slot) return *slot;
  auto op = std::make_unique<LiftOperator>();
  op->basis = monomial_basis(dim, degree);
  const std::size_t n = op->basis.size();
  for (std::size_t i = 0; i < n; ++i) op->index[op->basis[i]] = i;
  const auto norm_sq = HomogeneousPolynomial::norm_power(dim, 1);
  std::vector<mpq_class> a(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto image = laplacian(norm_sq * HomogeneousPolynomial::monomial(dim, op->basis[c]));
    for (const auto& [e, coef] : image.terms()) a[op->index.at(e) * n + c] = coef;
  }
  op->lu = std::make_unique<RationalLU>(std::move(a), n);
  slot = std::move(op);
  return *slot;
}

}  // namespace detail

/// Unique decomposition q = Σ_i |x|^{2i} h_{m-2i} with every h harmonic.
/// Returns [h_m, h_{m-2}, ..., h_1]. Odd degree only.
inline std::vector<HomogeneousPolynomial> harmonic_decompose(const HomogeneousPolynomial& q) {
  if (q.degree() % 2 == 0) throw std::invalid_argument("harmonic_decompose requires odd degree");
  const int d = q.dim();
  std::vector<HomogeneousPolynomial> out;
  HomogeneousPolynomial current = q;
  for (int m = q.degree(); m >= 1; m -= 2) {
    if (m == 1) {
      out.push_back(current);
      break;
    }
    // Find q' with Δ(|x|^2 q') = Δ current, so current - |x|^2 q' is harmonic.
    const auto& op = detail::lift_operator(d, m - 2);
    std::vector<mpq_class> rhs(op.basis.size());
    const auto lap = laplacian(current);
    for (const auto& [e, c] : lap.terms()) rhs[op.index.at(e)] = c;
    const auto sol = op.lu->solve(rhs);
    HomogeneousPolynomial lower(d, m - 2);
    for (std::size_t i = 0; i < sol.size(); ++i) lower.add_term(op.basis[i], sol[i]);
    HomogeneousPolynomial h = current - HomogeneousPolynomial::norm_power(d, 1) * lower;
    if (h.is_zero()) h = HomogeneousPolynomial(d, m);
    if (!laplacian(h).is_zero()) throw std::logic_error("harmonic_decompose: inconsistent system");
    out.push_back(std::move(h));
    current = std::move(lower);
  }
  return out;
}

/// Σ_i |x|^{2i} components[i].
inline HomogeneousPolynomial reassemble(const std::vector<HomogeneousPolynomial>& components) {
  if (components.empty()) throw std::invalid_argument("nothing to reassemble");
  const int d = components.front().dim();
  HomogeneousPolynomial out(d, components.front().degree());
  for (std::size_t i = 0; i < components.size(); ++i)
    out += HomogeneousPolynomial::norm_power(d, static_cast<int>(i)) * components[i];
  return out;
}

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<HomogeneousPolynomial> components;  ///< [P_{2n+1}, ..., P_1]
};

/// Admissible iff the degree-1 harmonic component vanishes.
inline AdmissibilityReport check_admissible(const HomogeneousPolynomial& q) {
  AdmissibilityReport r;
  r.components = harmonic_decompose(q);
  r.admissible = r.components.back().is_zero();
  return r;
}

// ---------------------------------------------------------------------------
// Kernels

/// K(x) = value as numerator / norm_sq^{power/2}, exact even when power is odd.
struct ExactKernelValue {
  mpq_class numerator;
  mpq_class norm_sq;
  int power = 0;

  double to_double() const {
    return numerator.get_d() / std::pow(norm_sq.get_d(), 0.5 * power);
  }

  /// Exact test of *this == factor * other.
  bool equals_scaled(const ExactKernelValue& other, const mpq_class& factor) const {
    const mpq_class rhs_num = factor * other.numerator;
    if (sgn(numerator) != sgn(rhs_num)) return false;
    // Compare squares: num^2 * s_o^{p_o} == rhs^2 * s^{p}.
    mpq_class lhs = numerator * numerator, rhs = rhs_num * rhs_num;
    for (int i = 0; i < other.power; ++i) lhs *= other.norm_sq;
    for (int i = 0; i < power; ++i) rhs *= norm_sq;
    return lhs == rhs;
  }
  bool operator==(const ExactKernelValue& o) const { return equals_scaled(o, 1); }
};

/// K(x) = P_{2k+1}(x) / |x|^{d+2k} with harmonic numerator.
class KernelSpec {
 public:
  KernelSpec(HomogeneousPolynomial numerator, int k, std::string id = "inline")
      : dim_(numerator.dim()), k_(k), numerator_(std::move(numerator)), id_(std::move(id)) {
    if (dim_ < 2) throw std::invalid_argument("kernel dimension must be >= 2");
    if (k_ < 0) throw std::invalid_argument("kernel degree parameter k must be >= 0");
    if (numerator_.is_zero()) throw std::invalid_argument("kernel numerator is zero");
    if (numerator_.degree() != 2 * k_ + 1) throw std::invalid_argument("kernel numerator degree must be 2k+1");
    if (!laplacian(numerator_).is_zero()) throw std::invalid_argument("kernel numerator is not harmonic");
    compile();
  }

  int dim() const { return dim_; }
  int k() const { return k_; }
  int degree() const { return 2 * k_ + 1; }
  const HomogeneousPolynomial& numerator() const { return numerator_; }
  const std::string& id() const { return id_; }
  /// Degree >= 3: the numerator has no degree-one harmonic part.
  bool admissible() const { return k_ >= 1; }

  /// Floating-point numerator.
  double numerator_at(const double* x) const {
    const int deg = degree();
    double pw[8][16];
    for (int i = 0; i < dim_; ++i) {
      pw[i][0] = 1.0;
      for (int p = 1; p <= deg; ++p) pw[i][p] = pw[i][p - 1] * x[i];
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < coef_.size(); ++t) {
      double v = coef_[t];
      const int* e = &exps_[t * dim_];
      for (int i = 0; i < dim_; ++i) v *= pw[i][e[i]];
      sum += v;
    }
    return sum;
  }

  /// K(x) in floating point; caller guarantees x != 0.
  double operator()(const double* x) const {
    double r2 = 0.0;
    for (int i = 0; i < dim_; ++i) r2 += x[i] * x[i];
    const int p = dim_ + 2 * k_;
    double den = 1.0;
    for (int i = 0; i < p / 2; ++i) den *= r2;
    if (p % 2) den *= std::sqrt(r2);
    return numerator_at(x) / den;
  }

 private:
  void compile() {
    if (dim_ > 8 || degree() > 15) throw std::invalid_argument("kernel too large for float evaluation");
    for (const auto& [e, c] : numerator_.terms()) {
      exps_.insert(exps_.end(), e.begin(), e.end());
      coef_.push_back(c.get_d());
    }
  }

  int dim_;
  int k_;
  HomogeneousPolynomial numerator_;
  std::string id_;
  std::vector<int> exps_;
  std::vector<double> coef_;
};

inline double kernel_eval(const KernelSpec& kernel, std::span<const double> x) {
  if (static_cast<int>(x.size()) != kernel.dim()) throw std::invalid_argument("evaluation point has wrong dimension");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }))
    throw std::domain_error("kernel evaluated at its singularity");
  return kernel(x.data());
}

inline ExactKernelValue kernel_eval(const KernelSpec& kernel, std::span<const mpq_class> x) {
  if (static_cast<int>(x.size()) != kernel.dim()) throw std::invalid_argument("evaluation point has wrong dimension");
  ExactKernelValue v;
  for (const auto& xi : x) v.norm_sq += xi * xi;
  if (v.norm_sq == 0) throw std::domain_error("kernel evaluated at its singularity");
  v.numerator = kernel.numerator()(x);
  v.power = kernel.dim() + 2 * kernel.k();
  return v;
}

/// P(∂)|x|^{2j} == 0, for 1 <= j <= 2k.
inline bool annihilation_check(const KernelSpec& kernel, int j) {
  if (j < 1 || j > std::max(2 * kernel.k(), 1))
    throw std::invalid_argument("annihilation_check: j out of range [1, 2k]");
  return apply_diff_operator(kernel.numerator(), HomogeneousPolynomial::norm_power(kernel.dim(), j)).is_zero();
}

// ---------------------------------------------------------------------------
// Kernel catalog

/// Re z^m (re=true) or Im z^m in two variables.
inline HomogeneousPolynomial complex_power_part(int m, bool re) {
  HomogeneousPolynomial p(2, m);
  mpz_class binom = 1;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * (m - j + 1) / j;
    // i^j real for even j, imaginary for odd j
    if ((j % 2 == 0) == re) {
      const int sign = re ? ((j / 2) % 2 ? -1 : 1) : (((j - 1) / 2) % 2 ? -1 : 1);
      p.add_term({m - j, j}, mpq_class(binom * sign));
    }
  }
  return p;
}

/// Harmonic top component of x1^a x2^b x3^c ... (zero-padded to dim).
inline HomogeneousPolynomial harmonic_top(int dim, const Exponent& e) {
  Exponent full(dim, 0);
  std::copy(e.begin(), e.end(), full.begin());
  auto q = HomogeneousPolynomial::monomial(dim, full);
  if (q.degree() % 2 == 0) throw std::invalid_argument("catalog monomials must have odd degree");
  return harmonic_decompose(q).front();
}

/// Catalog id scheme: "d2.re{m}", "d2.im{m}", "d{N}.x{m}", "d{N}.xy{m}",
/// "d{N}.xyz{m}" with m = 2k+1, and "riesz.d{N}" for x1/|x|^N.
inline KernelSpec catalog_kernel(const std::string& id) {
  auto bad = [&] { return std::invalid_argument("unknown catalog kernel id: " + id); };
  if (id.rfind("riesz.d", 0) == 0) {
    const int d = std::stoi(id.substr(7));
    Exponent e(d, 0);
    e[0] = 1;
    return KernelSpec(HomogeneousPolynomial::monomial(d, e), 0, id);
  }
  if (id.size() < 4 || id[0] != 'd') throw bad();
  const auto dot = id.find('.');
  if (dot == std::string::npos) throw bad();
  const int d = std::stoi(id.substr(1, dot - 1));
  const std::string rest = id.substr(dot + 1);
  std::size_t pos = 0;
  while (pos < rest.size() && !std::isdigit(static_cast<unsigned char>(rest[pos]))) ++pos;
  if (pos == rest.size()) throw bad();
  const std::string family = rest.substr(0, pos);
  const int m = std::stoi(rest.substr(pos));
  if (m < 1 || m % 2 == 0) throw bad();
  const int k = (m - 1) / 2;
  if (d == 2 && (family == "re" || family == "im")) return KernelSpec(complex_power_part(m, family == "re"), k, id);
  if (d >= 2 && family == "x") return KernelSpec(harmonic_top(d, {m}), k, id);
  if (d >= 2 && family == "xy" && m >= 1) return KernelSpec(harmonic_top(d, {m - 1, 1}), k, id);
  if (d >= 3 && family == "xyz" && m >= 3) return KernelSpec(harmonic_top(d, {m - 2, 1, 1}), k, id);
  throw bad();
}

/// The built-in kernels of degree 2k+1 in dimension d.
inline std::vector<KernelSpec> kernel_catalog(int d, int k) {
  const std::string m = std::to_string(2 * k + 1);
  const std::string pre = "d" + std::to_string(d) + ".";
  std::vector<std::string> ids;
  if (d == 2) {
    ids = {pre + "re" + m, pre + "im" + m};
  } else {
    ids = {pre + "x" + m, pre + "xy" + m};
    if (k >= 1) ids.push_back(pre + "xyz" + m);
  }
  std::vector<KernelSpec> out;
  for (const auto& id : ids) out.push_back(catalog_kernel(id));
  return out;
}

inline KernelSpec riesz_kernel(int d) { return catalog_kernel("riesz.d" + std::to_string(d)); }

// ---------------------------------------------------------------------------
// JSON: {"dim": d, "terms": [{"alpha": [..], "num": "..", "den": ".."}]}

inline nlohmann::json to_json(const HomogeneousPolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms())
    terms.push_back({{"alpha", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  return {{"dim", p.dim()}, {"terms", terms}};
}

inline HomogeneousPolynomial polynomial_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  HomogeneousPolynomial p(dim, 0);
  for (const auto& t : j.at("terms")) {
    mpq_class c(mpz_class(t.at("num").get<std::string>()), mpz_class(t.at("den").get<std::string>()));
    c.canonicalize();
    p.add_term(t.at("alpha").get<Exponent>(), c);
  }
  return p;
}

}  // namespace harmcantor
