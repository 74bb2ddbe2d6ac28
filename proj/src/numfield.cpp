#include "sicx/numfield.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sicx/lattice.hpp"

namespace sicx {

namespace {

bool vec_zero(const QVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

QVec vec_add(QVec a, const QVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

QVec vec_sub(QVec a, const QVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

QVec unit_vec(std::size_t n) {
  QVec v(n, 0);
  v[0] = 1;
  return v;
}

// Polynomials with coefficients in K_l, as vectors of QVec blocks.
using Poly = std::vector<QVec>;

void trim(Poly& p) {
  while (!p.empty() && vec_zero(p.back())) p.pop_back();
}

}  // namespace

TowerPtr FieldTower::rationals(long digits) {
  auto t = std::make_shared<FieldTower>();
  t->digits_ = digits;
  return t;
}

std::vector<Complex> FieldTower::roots() const {
  std::vector<Complex> r;
  for (const auto& l : levels_) r.push_back(l->embedding);
  return r;
}

bool FieldTower::is_prefix_of(const FieldTower& other) const {
  if (levels_.size() > other.levels_.size()) return false;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i] != other.levels_[i]) return false;
  return true;
}

QVec FieldTower::mul(const QVec& a, const QVec& b, std::size_t l) const {
  if (l == 0) return QVec{a[0] * b[0]};
  const Level& lv = level(l);
  const std::size_t n = lv.degree, B = dims_[l - 1];
  auto block = [&](const QVec& v, std::size_t e) { return QVec(v.begin() + static_cast<long>(e * B), v.begin() + static_cast<long>((e + 1) * B)); };
  std::vector<QVec> A(n), Bb(n);
  std::vector<bool> az(n), bz(n);
  for (std::size_t e = 0; e < n; ++e) {
    A[e] = block(a, e);
    Bb[e] = block(b, e);
    az[e] = vec_zero(A[e]);
    bz[e] = vec_zero(Bb[e]);
  }
  std::vector<QVec> P(2 * n - 1, QVec(B, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (az[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (bz[j]) continue;
      P[i + j] = vec_add(std::move(P[i + j]), mul(A[i], Bb[j], l - 1));
    }
  }
  for (std::size_t k = 2 * n - 1; k-- > n;) {
    if (vec_zero(P[k])) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (vec_zero(lv.minpoly[i])) continue;
      P[k - n + i] = vec_sub(std::move(P[k - n + i]), mul(P[k], lv.minpoly[i], l - 1));
    }
  }
  QVec out;
  out.reserve(n * B);
  for (std::size_t e = 0; e < n; ++e) out.insert(out.end(), P[e].begin(), P[e].end());
  return out;
}

QVec FieldTower::inv(const QVec& a, std::size_t l) const {
  if (vec_zero(a)) throw std::domain_error("division by zero in number field");
  if (l == 0) return QVec{1 / a[0]};
  const Level& lv = level(l);
  const std::size_t n = lv.degree, B = dims_[l - 1];
  const std::size_t k = l - 1;
  auto pmul = [&](const Poly& x, const Poly& y) {
    if (x.empty() || y.empty()) return Poly{};
    Poly r(x.size() + y.size() - 1, QVec(B, 0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (vec_zero(x[i])) continue;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (!vec_zero(y[j])) r[i + j] = vec_add(std::move(r[i + j]), mul(x[i], y[j], k));
    }
    trim(r);
    return r;
  };
  auto psub = [&](Poly x, const Poly& y) {
    if (x.size() < y.size()) x.resize(y.size(), QVec(B, 0));
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = vec_sub(std::move(x[i]), y[i]);
    trim(x);
    return x;
  };
  auto divmod = [&](Poly r, const Poly& b, Poly& q) {
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, QVec(B, 0));
    QVec lc = inv(b.back(), k);
    while (!r.empty() && r.size() >= b.size()) {
      std::size_t shift = r.size() - b.size();
      QVec c = mul(r.back(), lc, k);
      q[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (!vec_zero(b[i])) r[shift + i] = vec_sub(std::move(r[shift + i]), mul(c, b[i], k));
      r.back() = QVec(B, 0);
      trim(r);
    }
    return r;
  };
  Poly r0 = lv.minpoly, r1(n);
  for (std::size_t e = 0; e < n; ++e)
    r1[e] = QVec(a.begin() + static_cast<long>(e * B), a.begin() + static_cast<long>((e + 1) * B));
  trim(r1);
  Poly s0, s1{unit_vec(B)};
  while (!r1.empty()) {
    Poly q;
    Poly r = divmod(r0, r1, q);
    Poly s2 = psub(s0, pmul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw NotIrreducible("minimal polynomial of " + lv.tag + " has a common factor");
  QVec c = inv(r0[0], k);
  QVec out(n * B, 0);
  for (std::size_t e = 0; e < s0.size() && e < n; ++e) {
    QVec v = mul(s0[e], c, k);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<long>(e * B));
  }
  return out;
}

Complex FieldTower::eval(const QVec& a, std::size_t l, const std::vector<Complex>& roots) const {
  long bits = roots.empty() ? digits_to_bits(digits_) : roots[0].bits();
  PrecisionScope ps(bits_to_digits(bits));
  if (l == 0) return Complex(Real(a[0]), Real(0L));
  const std::size_t n = level(l).degree, B = dims_[l - 1];
  Complex acc(Real(0L), Real(0L));
  for (std::size_t e = n; e-- > 0;) {
    QVec blk(a.begin() + static_cast<long>(e * B), a.begin() + static_cast<long>((e + 1) * B));
    acc = acc * roots[l - 1] + eval(blk, l - 1, roots);
  }
  return acc;
}

TowerPtr adjoin_level(const TowerPtr& base, Level lv) {
  auto t = std::make_shared<FieldTower>(*base);
  t->dims_.push_back(base->degree() * lv.degree);
  t->levels_.push_back(std::make_shared<const Level>(std::move(lv)));
  return t;
}

// ---------------------------------------------------------------- elements

AlgebraicNumber::AlgebraicNumber(TowerPtr t, QVec c) : t_(std::move(t)), c_(std::move(c)) {
  if (c_.size() < t_->degree()) c_.resize(t_->degree(), 0);
  if (c_.size() != t_->degree()) throw std::invalid_argument("AlgebraicNumber: coordinate length exceeds degree");
}

AlgebraicNumber AlgebraicNumber::rational(const TowerPtr& t, const mpq_class& q) { return AlgebraicNumber(t, QVec{q}); }

AlgebraicNumber AlgebraicNumber::generator(const TowerPtr& t, std::size_t l) {
  if (l == 0 || l > t->height()) throw std::out_of_range("generator: level out of range");
  QVec c(t->degree(), 0);
  if (t->level(l).degree == 1) {
    // linear level: theta = -a_0
    const QVec& a0 = t->level(l).minpoly[0];
    for (std::size_t i = 0; i < a0.size(); ++i) c[i] = -a0[i];
  } else {
    c[t->degree(l - 1)] = 1;
  }
  return AlgebraicNumber(t, c);
}

bool AlgebraicNumber::is_zero() const { return vec_zero(c_); }

bool AlgebraicNumber::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

std::size_t AlgebraicNumber::level() const {
  for (std::size_t l = 0; l <= t_->height(); ++l) {
    bool inside = true;
    for (std::size_t i = t_->degree(l); i < c_.size() && inside; ++i) inside = c_[i] == 0;
    if (inside) return l;
  }
  return t_->height();
}

Complex AlgebraicNumber::embed() const { return t_->eval(c_, t_->height(), t_->roots()); }

Complex AlgebraicNumber::eval(const std::vector<Complex>& roots) const { return t_->eval(c_, t_->height(), roots); }

AlgebraicNumber AlgebraicNumber::inverse() const { return AlgebraicNumber(t_, t_->inv(c_, t_->height())); }

AlgebraicNumber AlgebraicNumber::lift(const TowerPtr& bigger) const {
  if (t_ == bigger) return *this;
  if (!t_->is_prefix_of(*bigger)) throw std::invalid_argument("lift: towers are not nested");
  return AlgebraicNumber(bigger, c_);
}

std::string AlgebraicNumber::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    std::string mono;
    std::size_t idx = i;
    for (std::size_t l = 1; l <= t_->height(); ++l) {
      std::size_t e = (idx / t_->degree(l - 1)) % t_->level(l).degree;
      if (e > 0) {
        if (!mono.empty()) mono += "*";
        mono += t_->level(l).tag;
        if (e > 1) mono += "^" + std::to_string(e);
      }
    }
    mpq_class a = abs(c_[i]);
    os << (first ? (c_[i] < 0 ? "-" : "") : (c_[i] < 0 ? " - " : " + "));
    first = false;
    if (mono.empty())
      os << a.get_str();
    else if (a == 1)
      os << mono;
    else
      os << a.get_str() << "*" << mono;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

void same_tower(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.tower() != b.tower()) throw std::invalid_argument("number field elements from different towers");
}

}  // namespace

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  same_tower(a, b);
  return AlgebraicNumber(a.tower(), vec_add(a.coeffs(), b.coeffs()));
}

AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  same_tower(a, b);
  return AlgebraicNumber(a.tower(), vec_sub(a.coeffs(), b.coeffs()));
}

AlgebraicNumber operator-(const AlgebraicNumber& a) {
  QVec c = a.coeffs();
  for (auto& x : c) x = -x;
  return AlgebraicNumber(a.tower(), c);
}

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  same_tower(a, b);
  const auto& t = a.tower();
  std::size_t l = std::max(a.level(), b.level());
  QVec x(a.coeffs().begin(), a.coeffs().begin() + static_cast<long>(t->degree(l)));
  QVec y(b.coeffs().begin(), b.coeffs().begin() + static_cast<long>(t->degree(l)));
  return AlgebraicNumber(t, t->mul(x, y, l));
}

AlgebraicNumber operator*(const mpq_class& q, const AlgebraicNumber& a) {
  QVec c = a.coeffs();
  for (auto& x : c) x *= q;
  return AlgebraicNumber(a.tower(), c);
}

AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  same_tower(a, b);
  const auto& t = b.tower();
  std::size_t l = b.level();
  QVec y(b.coeffs().begin(), b.coeffs().begin() + static_cast<long>(t->degree(l)));
  return a * AlgebraicNumber(t, t->inv(y, l));
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  return a.tower() == b.tower() && a.coeffs() == b.coeffs();
}

AlgebraicNumber pow(const AlgebraicNumber& a, long n) {
  AlgebraicNumber base = n < 0 ? a.inverse() : a;
  unsigned long e = static_cast<unsigned long>(n < 0 ? -n : n);
  AlgebraicNumber r = AlgebraicNumber::rational(a.tower(), 1);
  while (e) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

AlgebraicNumber eval_poly(const std::vector<AlgebraicNumber>& p, const AlgebraicNumber& x) {
  AlgebraicNumber acc = AlgebraicNumber::rational(x.tower(), 0);
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i].lift(x.tower());
  return acc;
}

// ------------------------------------------------------------------ roots

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, long digits) {
  std::vector<Complex> c = coeffs;
  while (c.size() > 1 && c.back().re.is_zero() && c.back().im.is_zero()) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  PrecisionScope ps(digits + 10);
  Complex lead = c.back();
  for (auto& v : c) v = v / lead;
  std::vector<Complex> z(static_cast<std::size_t>(n));
  if (n == 1) {
    z[0] = -c[0];
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -std::complex<double>(c[i].re.to_double(), c[i].im.to_double());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    for (int i = 0; i < n; ++i) {
      auto v = es.eigenvalues()[i];
      // small offset keeps Aberth away from exactly coincident guesses
      z[i] = Complex(Real(v.real() + 1e-13 * (i + 1)), Real(v.imag() + 1e-13 * (i + 2)));
    }
    const Real eps = pow10(-(digits + 5));
    for (int it = 0; it < 400; ++it) {
      Real worst(0L);
      for (int i = 0; i < n; ++i) {
        Complex p = c[n], dp(Real(0L), Real(0L));
        for (int k = n - 1; k >= 0; --k) {
          dp = dp * z[i] + p;
          p = p * z[i] + c[k];
        }
        if (norm(p).is_zero()) continue;
        Complex ratio = p / dp;
        Complex s(Real(0L), Real(0L));
        for (int j = 0; j < n; ++j)
          if (j != i) s += Complex(Real(1L)) / (z[i] - z[j]);
        Complex w = ratio / (Complex(Real(1L)) - ratio * s);
        z[i] -= w;
        Real rel = abs(w) / max(Real(1L), abs(z[i]));
        if (rel > worst) worst = rel;
      }
      if (worst < eps) break;
    }
  }
  const Real tie = pow10(-(digits / 2));
  for (auto& v : z) v.set_bits(digits_to_bits(digits));
  std::sort(z.begin(), z.end(), [&](const Complex& a, const Complex& b) {
    if (abs(a.re - b.re) > tie) return a.re < b.re;
    return a.im < b.im;
  });
  return z;
}

std::vector<Complex> basis_embeddings(const FieldTower& t, std::size_t l) {
  PrecisionScope ps(t.digits());
  std::vector<Complex> b{Complex(Real(1L), Real(0L))};
  for (std::size_t k = 1; k <= l; ++k) {
    const std::size_t n = t.level(k).degree, B = b.size();
    std::vector<Complex> nb(n * B);
    Complex pw(Real(1L), Real(0L));
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t i = 0; i < B; ++i) nb[e * B + i] = b[i] * pw;
      pw = pw * t.level(k).embedding;
    }
    b = std::move(nb);
  }
  return b;
}

AlgebraicNumber from_coordinates(const TowerPtr& t, const std::vector<mpq_class>& q) { return AlgebraicNumber(t, q); }

std::optional<AlgebraicNumber> recognize(const TowerPtr& t, const Complex& value, std::size_t l) {
  if (l == 0) l = t->height();
  std::vector<Complex> basis = basis_embeddings(*t, l);
  Complex v = value;
  if (v.bits() > digits_to_bits(t->digits())) v.set_bits(digits_to_bits(t->digits()));
  std::optional<std::vector<mpq_class>> q;
  try {
    q = express_in_basis(v, basis);
  } catch (const DegenerateRelation&) {
    return std::nullopt;
  }
  if (!q) return std::nullopt;
  return AlgebraicNumber(t, *q);
}

namespace {

std::vector<Complex> numeric_coeffs(const FieldTower& base, const std::vector<QVec>& poly,
                                    const std::vector<Complex>& roots) {
  std::vector<Complex> c;
  for (const auto& a : poly) c.push_back(base.eval(a, base.height(), roots));
  return c;
}

// Monic form of a polynomial over the base top field.
std::vector<QVec> make_monic(const TowerPtr& base, const std::vector<AlgebraicNumber>& minpoly) {
  std::vector<AlgebraicNumber> p;
  for (const auto& a : minpoly) p.push_back(a.lift(base));
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  if (p.size() < 2) throw std::invalid_argument("adjoin: polynomial must have degree >= 1");
  AlgebraicNumber li = p.back().inverse();
  std::vector<QVec> out;
  for (auto& a : p) out.push_back((a * li).coeffs());
  return out;
}

// Looks for a monic factor of degree k < n through theta, verified exactly.
void check_irreducible(const TowerPtr& base, const std::vector<QVec>& monic, const Complex& theta) {
  const std::size_t n = monic.size() - 1, D = base->degree();
  std::vector<Complex> bb = basis_embeddings(*base, base->height());
  for (std::size_t k = 1; k < n; ++k) {
    if (D * k + 1 > 48) break;
    std::vector<Complex> basis;
    Complex pw(Real(1L), Real(0L)), top;
    {
      PrecisionScope ps(base->digits());
      for (std::size_t j = 0; j < k; ++j) {
        for (const auto& b : bb) basis.push_back(b * pw);
        pw = pw * theta;
      }
      top = pw;
    }
    std::optional<std::vector<mpq_class>> q;
    try {
      q = express_in_basis(top, basis);
    } catch (const DegenerateRelation&) {
      continue;
    }
    if (!q) continue;
    // f = x^k - sum_j c_j x^j
    std::vector<AlgebraicNumber> f;
    for (std::size_t j = 0; j < k; ++j) {
      QVec cj(q->begin() + static_cast<long>(j * D), q->begin() + static_cast<long>((j + 1) * D));
      f.push_back(-AlgebraicNumber(base, cj));
    }
    f.push_back(AlgebraicNumber::rational(base, 1));
    // remainder of monic by f
    std::vector<AlgebraicNumber> r;
    for (const auto& a : monic) r.emplace_back(base, a);
    for (std::size_t s = n + 1; s-- > k;) {
      AlgebraicNumber c = r[s];
      if (c.is_zero()) continue;
      for (std::size_t i = 0; i <= k; ++i) r[s - k + i] = r[s - k + i] - c * f[i];
    }
    bool zero = true;
    for (std::size_t i = 0; i < k; ++i) zero = zero && r[i].is_zero();
    if (zero) throw NotIrreducible("adjoin: polynomial has a factor of degree " + std::to_string(k));
  }
}

TowerPtr adjoin_common(const TowerPtr& base, const std::string& tag, const std::vector<AlgebraicNumber>& minpoly,
                       const Complex* selector, int index, const AdjoinOptions& opt) {
  std::vector<QVec> monic = make_monic(base, minpoly);
  std::vector<Complex> roots =
      polynomial_roots(numeric_coeffs(*base, monic, base->roots()), base->digits());
  int chosen = index;
  if (selector) {
    PrecisionScope ps(base->digits());
    chosen = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
      if (abs(roots[i] - *selector) < abs(roots[chosen] - *selector)) chosen = static_cast<int>(i);
    Real tol = Real(opt.selector_tolerance) * max(Real(1L), abs(roots[chosen]));
    if (abs(roots[chosen] - *selector) > tol) throw NoRootNearSelector("adjoin: no root of the polynomial near selector");
  }
  if (chosen < 0 || chosen >= static_cast<int>(roots.size())) throw std::out_of_range("adjoin: root index");
  if (opt.check_irreducible) check_irreducible(base, monic, roots[chosen]);
  Level lv;
  lv.tag = tag;
  lv.degree = monic.size() - 1;
  lv.minpoly = monic;
  lv.root_index = chosen;
  lv.embedding = roots[chosen];
  return adjoin_level(base, std::move(lv));
}

}  // namespace

TowerPtr adjoin(const TowerPtr& base, const std::string& tag, const std::vector<AlgebraicNumber>& minpoly,
                const Complex& selector, const AdjoinOptions& opt) {
  return adjoin_common(base, tag, minpoly, &selector, -1, opt);
}

TowerPtr adjoin_index(const TowerPtr& base, const std::string& tag, const std::vector<AlgebraicNumber>& minpoly,
                      int root_index, const AdjoinOptions& opt) {
  return adjoin_common(base, tag, minpoly, nullptr, root_index, opt);
}

TowerPtr adjoin(const TowerPtr& base, const std::string& tag, const std::vector<mpq_class>& minpoly,
                const Complex& selector, const AdjoinOptions& opt) {
  std::vector<AlgebraicNumber> p;
  for (const auto& q : minpoly) p.push_back(AlgebraicNumber::rational(base, q));
  return adjoin(base, tag, p, selector, opt);
}

std::optional<std::vector<AlgebraicNumber>> minimal_polynomial_over(const TowerPtr& t, const Complex& value,
                                                                   int max_degree) {
  const std::size_t D = t->degree();
  std::vector<Complex> bb = basis_embeddings(*t, t->height());
  PrecisionScope ps(t->digits());
  Complex x = value;
  if (x.bits() > working_bits()) x.set_bits(working_bits());
  std::vector<Complex> basis;
  Complex pw(Real(1L), Real(0L));
  for (int k = 1; k <= max_degree; ++k) {
    for (const auto& b : bb) basis.push_back(b * pw);
    pw = pw * x;
    std::optional<std::vector<mpq_class>> q;
    try {
      q = express_in_basis(pw, basis);
    } catch (const DegenerateRelation&) {
      continue;
    } catch (const PrecisionRefused&) {
      return std::nullopt;
    }
    if (!q) continue;
    std::vector<AlgebraicNumber> poly;
    for (int j = 0; j < k; ++j) {
      QVec cj(q->begin() + static_cast<long>(j * D), q->begin() + static_cast<long>((j + 1) * D));
      poly.push_back(-AlgebraicNumber(t, cj));
    }
    poly.push_back(AlgebraicNumber::rational(t, 1));
    return poly;
  }
  return std::nullopt;
}

QVec exact_minimal_polynomial(const AlgebraicNumber& x) {
  const TowerPtr& t = x.tower();
  const std::size_t N = t->degree();
  // rows kept in echelon form: value vector (pivot entry 1) and the
  // combination of powers producing it
  std::vector<QVec> rows, combs;
  std::vector<std::size_t> pivots;
  AlgebraicNumber pw = AlgebraicNumber::rational(t, 1);
  for (std::size_t k = 0; k <= N; ++k) {
    QVec v = pw.coeffs();
    v.resize(N);
    QVec comb(k + 1);
    comb[k] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      mpq_class f = v[pivots[r]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < N; ++i) v[i] -= f * rows[r][i];
      for (std::size_t i = 0; i < combs[r].size(); ++i) comb[i] -= f * combs[r][i];
    }
    std::size_t piv = N;
    for (std::size_t i = 0; i < N; ++i)
      if (v[i] != 0) {
        piv = i;
        break;
      }
    if (piv == N) return comb;  // monic: coefficient of x^k is 1
    mpq_class inv = 1 / v[piv];
    for (auto& a : v) a *= inv;
    for (auto& a : comb) a *= inv;
    rows.push_back(std::move(v));
    combs.push_back(std::move(comb));
    pivots.push_back(piv);
    pw = pw * x;
  }
  throw std::logic_error("exact_minimal_polynomial: no dependency found");
}

std::string rational_polynomial_str(const QVec& c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    mpq_class a = abs(c[i]);
    os << (first ? (c[i] < 0 ? "-" : "") : (c[i] < 0 ? " - " : " + "));
    first = false;
    bool show = a != 1 || i == 0;
    if (show) os << a.get_str();
    if (i > 0) {
      if (show) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

std::vector<Complex> refined_roots(const FieldTower& t, long digits) {
  std::vector<Complex> out;
  PrecisionScope ps(digits + 10);
  const Real eps = pow10(-(digits + 5));
  for (std::size_t l = 1; l <= t.height(); ++l) {
    const Level& lv = t.level(l);
    std::vector<Complex> lower(out.begin(), out.end());
    std::vector<Complex> c;
    for (const auto& a : lv.minpoly) c.push_back(l == 1 ? Complex(Real(a[0]), Real(0L)) : t.eval(a, l - 1, lower));
    Complex z = lv.embedding;
    z.set_bits(digits_to_bits(digits + 10));
    for (int it = 0; it < 200; ++it) {
      Complex p = c.back(), dp(Real(0L), Real(0L));
      for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
      }
      Complex w = p / dp;
      z -= w;
      if (abs(w) < eps * max(Real(1L), abs(z))) break;
    }
    out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------- automorphisms

namespace {

// sigma applied to a length-D_l vector, given exact images of theta_1..theta_l.
AlgebraicNumber apply_images(const TowerPtr& t, const std::vector<AlgebraicNumber>& images, const QVec& a,
                             std::size_t l) {
  if (l == 0) return AlgebraicNumber::rational(t, a[0]);
  const std::size_t n = t->level(l).degree, B = t->degree(l - 1);
  AlgebraicNumber acc = AlgebraicNumber::rational(t, 0);
  for (std::size_t e = n; e-- > 0;) {
    QVec blk(a.begin() + static_cast<long>(e * B), a.begin() + static_cast<long>((e + 1) * B));
    acc = acc * images[l - 1];
    if (!vec_zero(blk)) acc = acc + apply_images(t, images, blk, l - 1);
  }
  return acc;
}

// Exact image of level l's minimal polynomial.
std::vector<AlgebraicNumber> image_minpoly(const TowerPtr& t, const std::vector<AlgebraicNumber>& images,
                                           std::size_t l) {
  std::vector<AlgebraicNumber> p;
  for (const auto& a : t->level(l).minpoly) p.push_back(apply_images(t, images, a, l - 1));
  return p;
}

std::optional<AlgebraicNumber> exact_root(const TowerPtr& t, const std::vector<AlgebraicNumber>& poly,
                                          const Complex& value, std::size_t l) {
  for (std::size_t lev : {l, t->height()}) {
    auto y = recognize(t, value, lev);
    if (y && eval_poly(poly, *y).is_zero()) return y;
    if (lev == t->height()) break;
  }
  return std::nullopt;
}

}  // namespace

EmbeddingAutomorphism::EmbeddingAutomorphism(TowerPtr t, std::size_t fixed, std::vector<AlgebraicNumber> images)
    : t_(std::move(t)), fixed_(fixed), images_(std::move(images)) {}

EmbeddingAutomorphism EmbeddingAutomorphism::identity(const TowerPtr& t, std::size_t fixed) {
  std::vector<AlgebraicNumber> im;
  for (std::size_t l = 1; l <= t->height(); ++l) im.push_back(AlgebraicNumber::generator(t, l));
  return EmbeddingAutomorphism(t, fixed, im);
}

std::vector<Complex> EmbeddingAutomorphism::image_roots() const {
  std::vector<Complex> r;
  for (const auto& y : images_) r.push_back(y.embed());
  return r;
}

AlgebraicNumber EmbeddingAutomorphism::apply(const AlgebraicNumber& x) const {
  AlgebraicNumber y = x.lift(t_);
  std::size_t l = y.level();
  if (l <= fixed_) return y;
  QVec a(y.coeffs().begin(), y.coeffs().begin() + static_cast<long>(t_->degree(l)));
  return apply_images(t_, images_, a, l);
}

Complex EmbeddingAutomorphism::apply_numeric(const AlgebraicNumber& x) const { return x.lift(t_).eval(image_roots()); }

EmbeddingAutomorphism EmbeddingAutomorphism::compose(const EmbeddingAutomorphism& other) const {
  std::vector<AlgebraicNumber> im;
  for (const auto& y : other.images_) im.push_back(apply(y));
  return EmbeddingAutomorphism(t_, std::min(fixed_, other.fixed_), im);
}

bool EmbeddingAutomorphism::is_identity() const {
  for (std::size_t l = 1; l <= images_.size(); ++l)
    if (!(images_[l - 1] == AlgebraicNumber::generator(t_, l))) return false;
  return true;
}

bool EmbeddingAutomorphism::operator==(const EmbeddingAutomorphism& o) const {
  return t_ == o.t_ && images_ == o.images_;
}

long EmbeddingAutomorphism::order() const {
  EmbeddingAutomorphism g = *this;
  for (long k = 1; k <= 100000; ++k) {
    if (g.is_identity()) return k;
    g = compose(g);
  }
  throw std::runtime_error("automorphism order not found");
}

std::vector<EmbeddingAutomorphism> automorphisms(const TowerPtr& t, std::size_t fixed) {
  std::vector<std::vector<AlgebraicNumber>> partial{{}};
  for (std::size_t l = 1; l <= fixed && l <= t->height(); ++l) partial[0].push_back(AlgebraicNumber::generator(t, l));
  for (std::size_t l = fixed + 1; l <= t->height(); ++l) {
    std::vector<std::vector<AlgebraicNumber>> next;
    for (const auto& im : partial) {
      std::vector<AlgebraicNumber> poly = image_minpoly(t, im, l);
      std::vector<Complex> c;
      for (const auto& a : poly) c.push_back(a.embed());
      for (const auto& rho : polynomial_roots(c, t->digits())) {
        auto y = exact_root(t, poly, rho, l);
        if (!y) continue;
        auto ext = im;
        ext.push_back(*y);
        next.push_back(std::move(ext));
      }
    }
    partial = std::move(next);
  }
  if (partial.empty()) throw std::runtime_error("automorphisms: no consistent assignment");
  std::vector<EmbeddingAutomorphism> out;
  for (auto& im : partial) out.emplace_back(t, fixed, std::move(im));
  return out;
}

EmbeddingAutomorphism conjugation_op(const TowerPtr& t) {
  std::vector<AlgebraicNumber> im;
  for (std::size_t l = 1; l <= t->height(); ++l) {
    std::vector<AlgebraicNumber> poly = image_minpoly(t, im, l);
    AlgebraicNumber g = AlgebraicNumber::generator(t, l);
    Complex target = conj(t->level(l).embedding);
    PrecisionScope ps(t->digits());
    if (abs(target - t->level(l).embedding) < pow10(-(t->digits() / 2)) && eval_poly(poly, g).is_zero()) {
      im.push_back(g);
      continue;
    }
    auto y = exact_root(t, poly, target, l);
    if (!y) throw std::runtime_error("conjugation_op: tower is not closed under complex conjugation");
    im.push_back(*y);
  }
  return EmbeddingAutomorphism(t, 0, im);
}

// -------------------------------------------------------------------- json

std::vector<std::string> coords_to_strings(const QVec& c) {
  std::vector<std::string> s;
  for (const auto& q : c) s.push_back(q.get_str());
  return s;
}

QVec coords_from_strings(const std::vector<std::string>& s) {
  QVec c;
  for (const auto& x : s) {
    mpq_class q;
    if (q.set_str(x, 10) != 0) throw std::invalid_argument("bad rational: " + x);
    q.canonicalize();
    c.push_back(q);
  }
  return c;
}

std::string tower_to_json(const FieldTower& t) {
  nlohmann::json j;
  j["digits"] = t.digits();
  j["levels"] = nlohmann::json::array();
  for (std::size_t l = 1; l <= t.height(); ++l) {
    const Level& lv = t.level(l);
    nlohmann::json e;
    e["tag"] = lv.tag;
    e["minpoly"] = nlohmann::json::array();
    for (const auto& a : lv.minpoly) e["minpoly"].push_back(coords_to_strings(a));
    e["root_index"] = lv.root_index;
    e["embedding"] = {to_decimal(lv.embedding.re), to_decimal(lv.embedding.im)};
    j["levels"].push_back(e);
  }
  return j.dump(1);
}

TowerPtr tower_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TowerPtr t = FieldTower::rationals(j.at("digits").get<long>());
  PrecisionScope ps(t->digits());
  for (const auto& e : j.at("levels")) {
    std::vector<AlgebraicNumber> poly;
    for (const auto& a : e.at("minpoly")) poly.emplace_back(t, coords_from_strings(a.get<std::vector<std::string>>()));
    AdjoinOptions opt;
    opt.check_irreducible = false;
    t = adjoin_index(t, e.at("tag").get<std::string>(), poly, e.at("root_index").get<int>(), opt);
    Complex stored(parse_real(e.at("embedding")[0].get<std::string>()), parse_real(e.at("embedding")[1].get<std::string>()));
    const Complex& got = t->level(t->height()).embedding;
    if (abs(stored - got) > pow10(-(t->digits() / 2)) * max(Real(1L), abs(got)))
      throw std::runtime_error("tower JSON: embedding does not match root_index");
  }
  return t;
}

}  // namespace sicx
