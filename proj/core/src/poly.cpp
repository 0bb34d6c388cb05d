#include "qb/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qb {

std::string VarSpec::var_name(uint32_t idx) const {
  if (idx < nx) return "x" + std::to_string(idx);
  if (idx < nx + ny) return "y" + std::to_string(idx - nx);
  throw Error(Errc::UnknownVariable, "variable index out of range");
}

uint32_t VarSpec::var_index(const std::string& name) const {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
    throw Error(Errc::UnknownVariable, "unknown variable '" + name + "'");
  uint32_t k = 0;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!isdigit((unsigned char)name[i]))
      throw Error(Errc::UnknownVariable, "unknown variable '" + name + "'");
    k = k * 10 + (name[i] - '0');
  }
  if (name[0] == 'x') {
    if (k >= nx) throw Error(Errc::UnknownVariable, "variable '" + name + "' out of range (nx=" + std::to_string(nx) + ")");
    return k;
  }
  if (k >= ny) throw Error(Errc::UnknownVariable, "variable '" + name + "' out of range (ny=" + std::to_string(ny) + ")");
  return nx + k;
}

MultiPoly MultiPoly::constant(VarSpec vs, FieldPtr field, const FieldElem& c) {
  MultiPoly p(vs, field);
  if (!field->is_zero(c)) p.terms_.emplace(Exp(vs.total(), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(VarSpec vs, FieldPtr field, uint32_t var, uint16_t e) {
  MultiPoly p(vs, field);
  Exp ex(vs.total(), 0);
  ex[var] = e;
  p.terms_.emplace(std::move(ex), field->one());
  return p;
}

MultiPoly MultiPoly::monomial(VarSpec vs, FieldPtr field, Exp e, const FieldElem& c) {
  MultiPoly p(vs, field);
  if (!field->is_zero(c)) p.terms_.emplace(std::move(e), c);
  return p;
}

void MultiPoly::check_compat(const MultiPoly& o) const {
  if (vs_ != o.vs_ || field_->spec().str() != o.field_->spec().str())
    throw Error(Errc::VarSpecMismatch, "operands live in different rings");
}

void MultiPoly::add_term(const Exp& e, const FieldElem& c) {
  if (field_->is_zero(c)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    FieldElem s = field_->add(it->second, c);
    if (field_->is_zero(s))
      terms_.erase(it);
    else
      it->second = s;
  }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_compat(o);
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  check_compat(o);
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, field_->neg(c));
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(vs_, field_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, field_->neg(c));
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_compat(o);
  MultiPoly r(vs_, field_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exp e = e1;
      for (size_t i = 0; i < e.size(); ++i) e[i] = (uint16_t)(e[i] + e2[i]);
      r.add_term(e, field_->mul(c1, c2));
    }
  }
  return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (vs_ != o.vs_) return false;
  return terms_ == o.terms_;
}

MultiPoly MultiPoly::scale(const FieldElem& c) const {
  MultiPoly r(vs_, field_);
  if (field_->is_zero(c)) return r;
  for (const auto& [e, coef] : terms_) r.terms_.emplace(e, field_->mul(coef, c));
  return r;
}

MultiPoly MultiPoly::pow(uint32_t e) const {
  MultiPoly r = constant(vs_, field_, field_->one());
  MultiPoly base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

int MultiPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return (int)exp_total(terms_.rbegin()->first);
}

int MultiPoly::x_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    (void)c;
    int dx = 0;
    for (uint32_t i = 0; i < vs_.nx; ++i) dx += e[i];
    d = std::max(d, dx);
  }
  return d;
}

int MultiPoly::y_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    (void)c;
    int dy = 0;
    for (uint32_t i = vs_.nx; i < vs_.total(); ++i) dy += e[i];
    d = std::max(d, dy);
  }
  return d;
}

bool MultiPoly::is_x_only() const {
  for (const auto& [e, c] : terms_) {
    (void)c;
    for (uint32_t i = vs_.nx; i < vs_.total(); ++i)
      if (e[i]) return false;
  }
  return true;
}

bool MultiPoly::is_y_only() const {
  for (const auto& [e, c] : terms_) {
    (void)c;
    for (uint32_t i = 0; i < vs_.nx; ++i)
      if (e[i]) return false;
  }
  return true;
}

namespace {
std::optional<int> homog_degree(const MultiPoly::TermMap& terms, uint32_t from, uint32_t to) {
  if (terms.empty()) return 0;
  int d = -1;
  for (const auto& [e, c] : terms) {
    (void)c;
    int s = 0;
    for (uint32_t i = from; i < to; ++i) s += e[i];
    if (d < 0)
      d = s;
    else if (d != s)
      return std::nullopt;
  }
  return d;
}
}  // namespace

std::optional<int> MultiPoly::homogeneous_degree_x() const {
  return homog_degree(terms_, 0, vs_.nx);
}
std::optional<int> MultiPoly::homogeneous_degree_y() const {
  return homog_degree(terms_, vs_.nx, vs_.total());
}
std::optional<int> MultiPoly::homogeneous_degree_total() const {
  return homog_degree(terms_, 0, vs_.total());
}

const std::pair<const Exp, FieldElem>& MultiPoly::leading_term() const {
  if (terms_.empty()) throw Error(Errc::BadInput, "zero polynomial has no leading term");
  return *terms_.rbegin();
}

MultiPoly MultiPoly::make_monic() const {
  if (terms_.empty()) return *this;
  return scale(field_->inv(leading_term().second));
}

FieldElem MultiPoly::eval(const std::vector<FieldElem>& point) const {
  if (point.size() != vs_.total())
    throw Error(Errc::VarSpecMismatch, "evaluation point has wrong arity");
  FieldElem acc = field_->zero();
  for (const auto& [e, c] : terms_) {
    FieldElem t = c;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i]) t = field_->mul(t, field_->pow(point[i], e[i]));
    }
    acc = field_->add(acc, t);
  }
  return acc;
}

MultiPoly MultiPoly::substitute(const Subst& assignment) const {
  std::vector<MultiPoly> images(vs_.total());
  for (uint32_t v = 0; v < vs_.total(); ++v) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      images[v] = variable(vs_, field_, v);
    } else if (std::holds_alternative<FieldElem>(it->second)) {
      images[v] = constant(vs_, field_, std::get<FieldElem>(it->second));
    } else {
      const MultiPoly& img = std::get<MultiPoly>(it->second);
      if (img.varspec() != vs_)
        throw Error(Errc::VarSpecMismatch, "substituted value has a different varspec");
      images[v] = img;
    }
  }
  return map_variables(vs_, images);
}

MultiPoly MultiPoly::map_variables(VarSpec target_vs, const std::vector<MultiPoly>& images) const {
  if (images.size() != vs_.total())
    throw Error(Errc::VarSpecMismatch, "need one image per variable");
  // memoized powers per variable
  std::vector<std::vector<MultiPoly>> pows(vs_.total());
  auto power = [&](uint32_t v, uint16_t e) -> const MultiPoly& {
    auto& cache = pows[v];
    if (cache.empty()) cache.push_back(MultiPoly::constant(target_vs, field_, field_->one()));
    while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
    return cache[e];
  };
  MultiPoly r(target_vs, field_);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = MultiPoly::constant(target_vs, field_, c);
    for (uint32_t v = 0; v < vs_.total(); ++v)
      if (e[v]) t = t * power(v, e[v]);
    r = r + t;
  }
  return r;
}

MultiPoly MultiPoly::derivative(uint32_t var) const {
  if (var >= vs_.total()) throw Error(Errc::UnknownVariable, "derivative variable out of range");
  MultiPoly r(vs_, field_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exp de = e;
    de[var] -= 1;
    r.add_term(de, field_->mul(c, field_->from_int(e[var])));
  }
  return r;
}

MultiPoly MultiPoly::divide_exact(const MultiPoly& divisor) const {
  check_compat(divisor);
  if (divisor.is_zero()) throw Error(Errc::BadInput, "division by zero polynomial");
  MultiPoly rem = *this;
  MultiPoly quot(vs_, field_);
  const auto& [dlead_e, dlead_c] = divisor.leading_term();
  while (!rem.is_zero()) {
    const auto& [rlead_e, rlead_c] = rem.leading_term();
    Exp qe(rlead_e.size());
    for (size_t i = 0; i < qe.size(); ++i) {
      if (rlead_e[i] < dlead_e[i])
        throw Error(Errc::NotSupported, "division is not exact");
      qe[i] = (uint16_t)(rlead_e[i] - dlead_e[i]);
    }
    FieldElem qc = field_->div(rlead_c, dlead_c);
    MultiPoly qt = MultiPoly::monomial(vs_, field_, qe, qc);
    quot = quot + qt;
    rem = rem - qt * divisor;
  }
  return quot;
}

std::string MultiPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // graded-lex descending
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string cs = field_->print(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (neg) cs = cs.substr(1);
    first = false;
    bool has_var = exp_total(e) > 0;
    if (!has_var) {
      os << cs;
      continue;
    }
    bool printed = false;
    if (cs != "1") {
      os << cs;
      printed = true;
    }
    for (uint32_t v = 0; v < vs_.total(); ++v) {
      if (!e[v]) continue;
      if (printed) os << "*";
      printed = true;
      os << vs_.var_name(v);
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

PolyMatrix::PolyMatrix(size_t rows, size_t cols, VarSpec vs, FieldPtr field)
    : rows_(rows), cols_(cols), vs_(vs), field_(std::move(field)) {
  entries_.assign(rows_ * cols_, MultiPoly::zero(vs_, field_));
}

PolyMatrix PolyMatrix::submatrix(const std::vector<size_t>& rs, const std::vector<size_t>& cs) const {
  PolyMatrix m(rs.size(), cs.size(), vs_, field_);
  for (size_t i = 0; i < rs.size(); ++i)
    for (size_t j = 0; j < cs.size(); ++j)
      m.at(i, j) = at(rs[i], cs[j]);
  return m;
}

namespace {

// Cofactor expansion over column subsets; minors are memoized by the
// bitmask of active columns (rows are always the first popcount rows).
MultiPoly det_cofactor(const PolyMatrix& m) {
  const size_t n = m.rows();
  std::map<uint32_t, MultiPoly> memo;
  // iterative over subset sizes
  std::vector<uint32_t> subsets;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) subsets.push_back(mask);
  std::sort(subsets.begin(), subsets.end(), [](uint32_t a, uint32_t b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (uint32_t mask : subsets) {
    int k = __builtin_popcount(mask);
    if (k == 0) {
      memo.emplace(mask, MultiPoly::constant(m.varspec(), m.field(), m.field()->one()));
      continue;
    }
    size_t row = (size_t)k - 1;
    MultiPoly acc = MultiPoly::zero(m.varspec(), m.field());
    // expansion along the last row: sign (-1)^(row + pos)
    int sign = (row % 2 == 0) ? 1 : -1;
    for (size_t c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      const MultiPoly& entry = m.at(row, c);
      if (!entry.is_zero()) {
        MultiPoly sub = memo.at(mask & ~(1u << c));
        MultiPoly term = entry * sub;
        acc = (sign > 0) ? acc + term : acc - term;
      }
      sign = -sign;
    }
    memo.emplace(mask, std::move(acc));
  }
  return memo.at((1u << n) - 1);
}

// Fraction-free Bareiss elimination; exact over any integral domain of
// polynomials (divisions by the previous pivot are exact).
MultiPoly det_bareiss(PolyMatrix m) {
  const size_t n = m.rows();
  auto F = m.field();
  MultiPoly prev = MultiPoly::constant(m.varspec(), F, F->one());
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k).is_zero()) {
      size_t swap_row = k + 1;
      while (swap_row < n && m.at(swap_row, k).is_zero()) ++swap_row;
      if (swap_row == n) return MultiPoly::zero(m.varspec(), F);
      for (size_t c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(swap_row, c));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        MultiPoly num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = num.divide_exact(prev);
      }
    }
    for (size_t i = k + 1; i < n; ++i) m.at(i, k) = MultiPoly::zero(m.varspec(), F);
    prev = m.at(k, k);
  }
  MultiPoly d = m.at(n - 1, n - 1);
  return sign > 0 ? d : -d;
}

}  // namespace

MultiPoly poly_det(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::NonSquare, "determinant of a non-square matrix");
  if (m.rows() == 0) throw Error(Errc::NonSquare, "determinant of an empty matrix");
  if (m.rows() <= 8) return det_cofactor(m);
  return det_bareiss(m);
}

namespace {

// Univariate dense representation over the field, little-endian.
using UPoly = std::vector<FieldElem>;

UPoly upoly_trim(UPoly p, const FieldPtr& F) {
  while (!p.empty() && F->is_zero(p.back())) p.pop_back();
  return p;
}

UPoly upoly_mod(UPoly a, const UPoly& b, const FieldPtr& F) {
  // b nonzero
  while (a.size() >= b.size()) {
    FieldElem coef = F->div(a.back(), b.back());
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i)
      a[shift + i] = F->sub(a[shift + i], F->mul(coef, b[i]));
    a = upoly_trim(std::move(a), F);
    if (a.size() < b.size()) break;
  }
  return a;
}

UPoly upoly_gcd(UPoly a, UPoly b, const FieldPtr& F) {
  a = upoly_trim(std::move(a), F);
  b = upoly_trim(std::move(b), F);
  while (!b.empty()) {
    UPoly r = upoly_mod(a, b, F);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    FieldElem inv = F->inv(a.back());
    for (auto& c : a) c = F->mul(c, inv);
  }
  return a;
}

}  // namespace

MultiPoly poly_gcd_xonly(const std::vector<MultiPoly>& ps) {
  std::vector<const MultiPoly*> nz;
  for (const auto& p : ps) {
    if (!p.is_x_only()) throw Error(Errc::NotXOnly, "gcd inputs must be x-only");
    if (!p.is_zero()) nz.push_back(&p);
  }
  if (ps.empty()) throw Error(Errc::BadInput, "gcd of an empty list");
  const VarSpec vs = ps.front().varspec();
  const FieldPtr F = ps.front().field();
  if (nz.empty()) return MultiPoly::zero(vs, F);

  if (vs.nx == 2) {
    // Binary homogeneous forms. Write each input as x0^v0 x1^v1 g with g
    // divisible by neither variable; then gcd = x0^min(v0) x1^min(v1)
    // times the homogenization of the univariate gcd of the g(1, t).
    uint16_t min_v0 = UINT16_MAX, min_v1 = UINT16_MAX;
    UPoly g;
    bool first = true;
    for (auto* p : nz) {
      if (!p->homogeneous_degree_x())
        throw Error(Errc::NotSupported, "binary gcd expects homogeneous forms");
      uint16_t v0 = UINT16_MAX, v1 = UINT16_MAX;
      int deg = p->x_degree();
      for (const auto& [e, c] : p->terms()) {
        (void)c;
        v0 = std::min(v0, e[0]);
        v1 = std::min(v1, e[1]);
      }
      min_v0 = std::min(min_v0, v0);
      min_v1 = std::min(min_v1, v1);
      // stripped part as a polynomial in t = x1/x0 (degree deg - v0 - v1)
      UPoly u((size_t)(deg - v0 - v1) + 1, F->zero());
      for (const auto& [e, c] : p->terms()) u[e[1] - v1] = c;
      if (first) {
        g = upoly_trim(std::move(u), F);
        first = false;
      } else {
        g = upoly_gcd(std::move(g), std::move(u), F);
      }
    }
    MultiPoly r(vs, F);
    int gdeg = (int)g.size() - 1;
    for (size_t i = 0; i < g.size(); ++i) {
      if (F->is_zero(g[i])) continue;
      Exp e(vs.total(), 0);
      e[0] = (uint16_t)(gdeg - (int)i + min_v0);
      e[1] = (uint16_t)(i + min_v1);
      r.add_term(e, g[i]);
    }
    return r.make_monic();
  }

  // nx != 2: only monomial gcds
  for (auto* p : nz)
    if (p->term_count() != 1)
      throw Error(Errc::NotSupported, "gcd with nx != 2 supports monomial inputs only");
  Exp e(vs.total(), 0);
  bool first = true;
  for (auto* p : nz) {
    const Exp& pe = p->terms().begin()->first;
    if (first) {
      e = pe;
      first = false;
    } else {
      for (size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], pe[i]);
    }
  }
  return MultiPoly::monomial(vs, F, e, F->one());
}

PolyMatrix jacobian(const std::vector<MultiPoly>& ps) {
  if (ps.empty()) throw Error(Errc::BadInput, "jacobian of an empty system");
  const VarSpec vs = ps.front().varspec();
  PolyMatrix j(ps.size(), vs.total(), vs, ps.front().field());
  for (size_t i = 0; i < ps.size(); ++i)
    for (uint32_t v = 0; v < vs.total(); ++v)
      j.at(i, v) = ps[i].derivative(v);
  return j;
}

}  // namespace qb
