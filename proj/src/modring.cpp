#include "sicx/modring.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sicx {

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 inv_mod(i64 a, i64 m) {
  i64 r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
  while (r1) {
    i64 q = r0 / r1;
    i64 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw std::invalid_argument("inv_mod: not a unit");
  return mod(s0, m);
}

ModMatrix::ModMatrix(i64 a_, i64 b_, i64 c_, i64 d_, i64 m_)
    : a(mod(a_, m_)), b(mod(b_, m_)), c(mod(c_, m_)), d(mod(d_, m_)), m(m_) {
  if (m_ < 1) throw std::invalid_argument("modulus must be positive");
}

i64 ModMatrix::det() const { return mod(a * d - b * c, m); }
i64 ModMatrix::trace() const { return mod(a + d, m); }
bool ModMatrix::invertible() const { return gcd(det(), m) == 1; }

ModMatrix ModMatrix::inverse() const {
  i64 di = inv_mod(det(), m);
  return ModMatrix(d * di, -b * di, -c * di, a * di, m);
}

ModMatrix ModMatrix::pow(i64 e) const {
  ModMatrix base = e < 0 ? inverse() : *this;
  if (e < 0) e = -e;
  ModMatrix r = identity(m);
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

ModMatrix ModMatrix::reduce(i64 m2) const {
  if (m % m2 != 0) throw std::invalid_argument("reduce: modulus does not divide");
  return ModMatrix(a, b, c, d, m2);
}

IndexPair ModMatrix::apply(const IndexPair& p) const {
  return {mod(a * p.p1 + b * p.p2, m), mod(c * p.p1 + d * p.p2, m)};
}

std::string ModMatrix::str() const {
  std::ostringstream os;
  os << "[[" << a << "," << b << "],[" << c << "," << d << "]] mod " << m;
  return os.str();
}

ModMatrix operator*(const ModMatrix& x, const ModMatrix& y) {
  if (x.m != y.m) throw std::invalid_argument("modulus mismatch");
  return ModMatrix(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                   x.c * y.b + x.d * y.d, x.m);
}

ModMatrix operator+(const ModMatrix& x, const ModMatrix& y) {
  if (x.m != y.m) throw std::invalid_argument("modulus mismatch");
  return ModMatrix(x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d, x.m);
}

ModMatrix operator*(i64 s, const ModMatrix& x) { return ModMatrix(s * x.a, s * x.b, s * x.c, s * x.d, x.m); }

// ---- MatGroup ---------------------------------------------------------

MatGroup::MatGroup(i64 m, std::vector<ModMatrix> elements) : m_(m), el_(std::move(elements)) {
  for (const auto& x : el_)
    if (x.m != m) throw std::invalid_argument("MatGroup: modulus mismatch");
  std::sort(el_.begin(), el_.end());
  el_.erase(std::unique(el_.begin(), el_.end()), el_.end());
}

MatGroup MatGroup::generated(i64 m, const std::vector<ModMatrix>& gens) {
  std::set<ModMatrix> seen{ModMatrix::identity(m)};
  std::deque<ModMatrix> todo{ModMatrix::identity(m)};
  while (!todo.empty()) {
    ModMatrix x = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      ModMatrix y = x * g;
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return MatGroup(m, std::vector<ModMatrix>(seen.begin(), seen.end()));
}

bool MatGroup::contains(const ModMatrix& x) const { return std::binary_search(el_.begin(), el_.end(), x); }

bool MatGroup::is_closed() const {
  if (!contains(ModMatrix::identity(m_))) return false;
  for (const auto& x : el_) {
    if (!x.invertible() || !contains(x.inverse())) return false;
    for (const auto& y : el_)
      if (!contains(x * y)) return false;
  }
  return true;
}

bool MatGroup::is_abelian() const {
  for (std::size_t i = 0; i < el_.size(); ++i)
    for (std::size_t j = i + 1; j < el_.size(); ++j)
      if (el_[i] * el_[j] != el_[j] * el_[i]) return false;
  return true;
}

bool MatGroup::subset_of(const MatGroup& other) const {
  return std::includes(other.el_.begin(), other.el_.end(), el_.begin(), el_.end());
}

MatGroup intersect(const MatGroup& x, const MatGroup& y) {
  std::vector<ModMatrix> out;
  std::set_intersection(x.elements().begin(), x.elements().end(), y.elements().begin(), y.elements().end(),
                        std::back_inserter(out));
  return MatGroup(x.modulus(), std::move(out));
}

// ---- Named matrices ---------------------------------------------------

i64 dprime(i64 d) {
  if (d < 4) throw std::invalid_argument("dimension must be at least 4");
  return d % 2 ? d : 2 * d;
}

ModMatrix zauner_matrix(i64 d) {
  i64 m = dprime(d);
  return ModMatrix(0, d - 1, d + 1, d - 1, m);
}

ModMatrix fa_matrix(i64 d) {
  if (d < 4 || d % 9 != 3) throw std::invalid_argument("F_a needs d = 3 mod 9");
  i64 m = dprime(d);
  return ModMatrix(1, d + 3, (4 * d - 3) / 3, d - 2, m);
}

ModMatrix j_matrix(i64 m) { return ModMatrix(1, 0, 0, -1, m); }

ChiSplit chi_split(i64 d) {
  if (d % 3 != 0 || (d / 3) % 3 != 1) throw std::invalid_argument("chi needs d = 3n with n = 1 mod 3");
  ChiSplit s;
  s.d = d;
  s.n = d / 3;
  s.nprime = s.n % 2 ? s.n : 2 * s.n;
  s.dprime = dprime(d);
  return s;
}

std::pair<ModMatrix, ModMatrix> chi_iso(const ModMatrix& M, i64 d) {
  ChiSplit s = chi_split(d);
  if (M.m != s.dprime) throw std::invalid_argument("chi_iso: matrix must be mod d'");
  i64 k = 2 * s.n + 1;
  if ((k * M.c) % 3 != 0) throw std::invalid_argument("chi_iso: (2n+1)c/3 not integral");
  ModMatrix first(M.a, 3 * M.b, (k / 3) * M.c, M.d, s.nprime);
  return {first, M.reduce(3)};
}

namespace {
i64 crt(i64 x, i64 nx, i64 y, i64 ny) {
  // z = x mod nx, z = y mod ny, coprime moduli
  i64 t = mod((y - x) * inv_mod(nx, ny), ny);
  return mod(x + nx * t, nx * ny);
}
}  // namespace

ModMatrix chi_inverse(const ModMatrix& first, const ModMatrix& second, i64 d) {
  ChiSplit s = chi_split(d);
  if (first.m != s.nprime || second.m != 3) throw std::invalid_argument("chi_inverse: wrong moduli");
  i64 k = (2 * s.n + 1) / 3;  // inverse of 3 mod n'
  i64 a = first.a, b = mod(k * first.b, s.nprime), c = mod(3 * first.c, s.nprime), dd = first.d;
  return ModMatrix(crt(a, s.nprime, second.a, 3), crt(b, s.nprime, second.b, 3), crt(c, s.nprime, second.c, 3),
                   crt(dd, s.nprime, second.d, 3), s.dprime);
}

ModMatrix fa_bar(i64 d) {
  ChiSplit s = chi_split(d);
  return ModMatrix(1, s.n + 9, (4 * s.n - 1) / 3, s.n - 2, s.nprime);
}

ModMatrix h2_generator(i64 d) {
  ChiSplit s = chi_split(d);
  ModMatrix Fa = fa_matrix(d);
  return (2 * s.n + 1) / 3 * Fa + ModMatrix::scalar((4 * s.n - 1) / 3, s.dprime);
}

MatGroup linear_span_group(const ModMatrix& H) {
  std::vector<ModMatrix> out;
  for (i64 r = 0; r < H.m; ++r)
    for (i64 s = 0; s < H.m; ++s) {
      ModMatrix x = ModMatrix::scalar(r, H.m) + s * H;
      if (x.invertible()) out.push_back(x);
    }
  return MatGroup(H.m, std::move(out));
}

MatGroup h2_group(i64 d) { return linear_span_group(fa_matrix(d)); }

MatGroup hbar_group(int j) {
  switch (j) {
    case 4:
      return MatGroup::generated(3, {ModMatrix(-1, 0, 0, -1, 3), ModMatrix(1, 0, 0, -1, 3)});
    case 6:
      return MatGroup::generated(3, {ModMatrix(-1, 0, 1, -1, 3)});
    case 8:
      return MatGroup::generated(3, {ModMatrix(1, -1, 1, 1, 3)});
    default:
      throw std::invalid_argument("hbar_group: j must be 4, 6 or 8");
  }
}

MaximalAbelian maximal_abelian_subgroups(i64 d) {
  ChiSplit s = chi_split(d);
  if (d % 9 != 3) throw std::invalid_argument("maximal_abelian_subgroups needs d = 3 mod 9");
  MatGroup cbar = centralizer(fa_bar(d), s.nprime);
  auto pull = [&](int j) {
    std::vector<ModMatrix> out;
    MatGroup hb = hbar_group(j);
    for (const auto& A : cbar.elements())
      for (const auto& B : hb.elements()) out.push_back(chi_inverse(A, B, d));
    return MatGroup(s.dprime, std::move(out));
  };
  return {pull(4), pull(6), pull(8)};
}

std::vector<ModMatrix> gl2_elements(i64 m) {
  std::vector<ModMatrix> out;
  for (i64 a = 0; a < m; ++a)
    for (i64 b = 0; b < m; ++b)
      for (i64 c = 0; c < m; ++c)
        for (i64 d = 0; d < m; ++d)
          if (gcd(mod(a * d - b * c, m), m) == 1) out.emplace_back(a, b, c, d, m);
  return out;
}

std::vector<ModMatrix> esl2_elements(i64 m) {
  std::vector<ModMatrix> out;
  for (i64 a = 0; a < m; ++a)
    for (i64 b = 0; b < m; ++b)
      for (i64 c = 0; c < m; ++c)
        for (i64 d = 0; d < m; ++d) {
          i64 det = mod(a * d - b * c, m);
          if (det == 1 % m || det == mod(-1, m)) out.emplace_back(a, b, c, d, m);
        }
  return out;
}

MatGroup centralizer(const std::vector<ModMatrix>& Fs, i64 m) {
  for (const auto& F : Fs)
    if (F.m != m) throw std::invalid_argument("centralizer: modulus mismatch");
  std::vector<ModMatrix> out;
  for (i64 y = 0; y < m; ++y)
    for (i64 z = 0; z < m; ++z) {
      // off-diagonal condition y c = b z for every F
      bool ok = true;
      for (const auto& F : Fs)
        if (mod(y * F.c - F.b * z, m) != 0) {
          ok = false;
          break;
        }
      if (!ok) continue;
      for (i64 x = 0; x < m; ++x)
        for (i64 w = 0; w < m; ++w) {
          ModMatrix G(x, y, z, w, m);
          bool comm = true;
          for (const auto& F : Fs)
            if (G * F != F * G) {
              comm = false;
              break;
            }
          if (comm && G.invertible()) out.push_back(G);
        }
    }
  return MatGroup(m, std::move(out));
}

MatGroup centralizer(const ModMatrix& F, i64 m) { return centralizer(std::vector<ModMatrix>{F}, m); }

ModMatrix symmetry_image(const ModMatrix& F) {
  i64 det = F.det();
  if (det == 1 % F.m) return F;
  if (det == mod(-1, F.m)) return mod(-1, F.m) * F;
  throw std::invalid_argument("symmetry_image: determinant must be +-1");
}

std::vector<Orbit> orbits(const MatGroup& G, i64 dp) {
  if (G.modulus() != dp) throw std::invalid_argument("orbits: group modulus differs from d'");
  std::vector<char> seen(static_cast<std::size_t>(dp * dp), 0);
  std::vector<Orbit> out;
  for (i64 p1 = 0; p1 < dp; ++p1)
    for (i64 p2 = 0; p2 < dp; ++p2) {
      if (seen[p1 * dp + p2]) continue;
      std::set<IndexPair> orb;
      for (const auto& g : G.elements()) orb.insert(g.apply({p1, p2}));
      for (const auto& q : orb) seen[q.p1 * dp + q.p2] = 1;
      out.emplace_back(orb.begin(), orb.end());
    }
  return out;
}

// ---- Quotient ---------------------------------------------------------

Quotient::Quotient(const MatGroup& G, const MatGroup& S) {
  if (!S.subset_of(G)) throw std::invalid_argument("Quotient: S is not a subgroup of G");
  for (const auto& g : G.elements()) {
    if (index_.count(g)) continue;
    std::size_t k = reps_.size();
    reps_.push_back(g);
    for (const auto& s : S.elements()) index_[g * s] = k;
  }
  const std::size_t n = reps_.size();
  table_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = coset_of(reps_[i] * reps_[j]);
  id_ = coset_of(ModMatrix::identity(G.modulus()));
}

std::size_t Quotient::coset_of(const ModMatrix& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) throw std::invalid_argument("Quotient: element outside the group");
  return it->second;
}

std::size_t Quotient::element_order(std::size_t i) const {
  std::size_t k = 1, x = i;
  while (x != id_) {
    x = mul(x, i);
    ++k;
  }
  return k;
}

}  // namespace sicx
