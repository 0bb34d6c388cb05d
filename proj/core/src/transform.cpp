#include "qb/transform.hpp"

#include "qb/enumerate.hpp"

#include <algorithm>

namespace qb {

MultiPoly change_field(const MultiPoly& p, const FieldPtr& target) {
  auto src = p.field();
  // subfield embedding basis, when lifting F_{p^a} -> F_{p^{ka}}
  std::vector<uint32_t> basis;
  if (src->finite() && target->finite()) {
    if (src->p() != target->p())
      throw Error(Errc::BadInput, "cannot change between different characteristics");
    if (src->kind() == FieldKind::Extension) basis = src->embedding_into(*target);
  }
  MultiPoly r(p.varspec(), target);
  for (const auto& [e, c] : p.terms()) {
    FieldElem tc;
    if (src->finite()) {
      if (!target->finite()) throw Error(Errc::BadInput, "cannot lift a finite field to Q");
      if (basis.empty()) {
        tc = FieldElem::finite(c.code());  // prime subfield embeds as constants
      } else {
        uint32_t code = (uint32_t)c.code(), acc = 0;
        for (size_t bi = 0; bi < basis.size(); ++bi) {
          acc = target->fadd(acc, target->fmul(code % src->p(), basis[bi]));
          code /= src->p();
        }
        tc = FieldElem::finite(acc);
      }
    } else {
      tc = target->from_rat(c.rat());
    }
    r.add_term(e, tc);
  }
  return r;
}

BidegreeDivisor BidegreeDivisor::make(uint32_t d, uint32_t n, std::vector<MultiPoly> f,
                                      FieldPtr field) {
  if (d < 1) throw Error(Errc::DegreeTooSmall, "bidegree (d,2) needs d >= 1");
  if (f.size() != d + 1)
    throw Error(Errc::BadInput, "expected d+1 = " + std::to_string(d + 1) + " coefficient forms");
  BidegreeDivisor div;
  div.d_ = d;
  div.n_ = n;
  div.field_ = std::move(field);
  const VarSpec vs{2, n + 1};
  bool any = false;
  for (auto& fi : f) {
    if (fi.varspec() != vs) throw Error(Errc::VarSpecMismatch, "f_i has wrong varspec");
    if (!fi.is_zero()) {
      any = true;
      if (!fi.is_y_only() || fi.homogeneous_degree_y() != 2)
        throw Error(Errc::BadInput, "each f_i must be a quadratic form in y");
    }
  }
  if (!any) throw Error(Errc::BadInput, "at least one f_i must be nonzero");
  div.f_ = std::move(f);
  return div;
}

std::optional<BidegreeDivisor> BidegreeDivisor::from_bundle(const QuadricBundle& b) {
  if (b.base_dim() != 1) return std::nullopt;
  const auto& w = b.weights();
  for (size_t i = 1; i < w.size(); ++i)
    if (w[i] != w[0]) return std::nullopt;
  int d = b.multidegree().diag[0] - 2 * w[0];  // the common constant c
  if (d < 1) return std::nullopt;
  const uint32_t n = b.fiber_dim() + 1;
  const VarSpec vs{2, n + 1};
  auto F = b.field();
  std::vector<MultiPoly> f((size_t)d + 1, MultiPoly::zero(vs, F));
  const uint32_t m = b.fiber_dim() + 2;
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = i; j < m; ++j) {
      const MultiPoly& s = b.sigma(i, j);
      for (const auto& [e, c] : s.terms()) {
        // term c * x0^{e0} x1^{e1} y_i y_j with e0 + e1 = d
        Exp ye(vs.total(), 0);
        ye[2 + i] = (uint16_t)(ye[2 + i] + 1);
        ye[2 + j] = (uint16_t)(ye[2 + j] + 1);
        f[e[1]].add_term(ye, c);
      }
    }
  return make((uint32_t)d, n, std::move(f), F);
}

MultiPoly BidegreeDivisor::equation() const {
  const VarSpec vs = varspec();
  MultiPoly eq(vs, field_);
  for (uint32_t i = 0; i <= d_; ++i) {
    if (f_[i].is_zero()) continue;
    Exp e(vs.total(), 0);
    e[0] = (uint16_t)(d_ - i);
    e[1] = (uint16_t)i;
    eq = eq + MultiPoly::monomial(vs, field_, e, field_->one()) * f_[i];
  }
  return eq;
}

QuadricSystem QuadricSystem::make(uint32_t n, std::vector<MultiPoly> quadrics) {
  if (quadrics.empty()) throw Error(Errc::BadInput, "empty quadric system");
  QuadricSystem sys;
  sys.n_ = n;
  sys.field_ = quadrics.front().field();
  const VarSpec vs{0, n + 1};
  auto F = sys.field_;
  FieldElem half = F->inv(F->from_int(2));
  for (auto& q : quadrics) {
    if (q.varspec() != vs) throw Error(Errc::VarSpecMismatch, "quadric has wrong varspec");
    if (!q.is_zero() && q.homogeneous_degree_y() != 2)
      throw Error(Errc::BadInput, "system entries must be quadratic forms");
    std::vector<std::vector<FieldElem>> g(n + 1, std::vector<FieldElem>(n + 1, F->zero()));
    for (const auto& [e, c] : q.terms()) {
      int i = -1, j = -1;
      for (uint32_t v = 0; v < n + 1; ++v) {
        if (e[v] == 2) i = j = (int)v;
        if (e[v] == 1) (i < 0 ? i : j) = (int)v;
      }
      if (i == j) {
        g[i][i] = c;
      } else {
        FieldElem hc = F->mul(c, half);
        g[i][j] = hc;
        g[j][i] = hc;
      }
    }
    sys.grams_.push_back(std::move(g));
    sys.quadrics_.push_back(std::move(q));
  }
  return sys;
}

PolyMatrix build_M(const BidegreeDivisor& div) {
  const uint32_t d = div.d();
  if (d < 2) throw Error(Errc::DegreeTooSmall, "M_(z) needs d >= 2");
  // ring with x-block = z_0..z_{d-1}, y-block = y_0..y_n
  const VarSpec vs{d, div.n() + 1};
  auto F = div.field();
  PolyMatrix m(d + 1, 3, vs, F);
  // map each f_i into the extended ring
  std::vector<MultiPoly> images(div.varspec().total(), MultiPoly::zero(vs, F));
  for (uint32_t yv = 0; yv < div.n() + 1; ++yv)
    images[2 + yv] = MultiPoly::variable(vs, F, d + yv);
  auto lift = [&](const MultiPoly& p) { return p.map_variables(vs, images); };
  for (uint32_t r = 0; r <= d; ++r) {
    if (r > 0) m.at(r, 0) = -MultiPoly::variable(vs, F, r - 1);
    if (r < d) m.at(r, 1) = MultiPoly::variable(vs, F, r);
    m.at(r, 2) = lift(div.f(r));
  }
  return m;
}

namespace {

// f_i pushed into the y-only varspec {0, n+1}
std::vector<MultiPoly> y_only_fs(const BidegreeDivisor& div) {
  const VarSpec src = div.varspec();
  const VarSpec dst{0, div.n() + 1};
  auto F = div.field();
  std::vector<MultiPoly> images(src.total(), MultiPoly::zero(dst, F));
  for (uint32_t yv = 0; yv < div.n() + 1; ++yv)
    images[2 + yv] = MultiPoly::variable(dst, F, yv);
  std::vector<MultiPoly> out;
  for (uint32_t i = 0; i <= div.d(); ++i) out.push_back(div.f(i).map_variables(dst, images));
  return out;
}

}  // namespace

QuadricSystem fiber_X(const BidegreeDivisor& div, const std::vector<FieldElem>& zbar) {
  const uint32_t d = div.d();
  if (d < 2) throw Error(Errc::DegreeTooSmall, "fiber X needs d >= 2");
  if (zbar.size() != d) throw Error(Errc::BadInput, "zbar must have length d");
  auto F = div.field();
  bool all_zero = true;
  for (const auto& z : zbar)
    if (!F->is_zero(z)) all_zero = false;
  if (all_zero) throw Error(Errc::ZeroVector, "zbar must be nonzero");

  auto fs = y_only_fs(div);
  auto z = [&](int i) -> FieldElem {
    if (i < 0 || i >= (int)d) return F->zero();
    return zbar[i];
  };
  std::vector<MultiPoly> gens;
  if (!F->is_zero(zbar[0])) {
    // minors on rows {0, 1, i}: z0^2 f_i - z0 z_{i-1} f_1 + (z1 z_{i-1} - z0 z_i) f_0
    for (uint32_t i = 2; i <= d; ++i) {
      FieldElem c_fi = F->mul(zbar[0], zbar[0]);
      FieldElem c_f1 = F->neg(F->mul(zbar[0], z(i - 1)));
      FieldElem c_f0 = F->sub(F->mul(z(1), z(i - 1)), F->mul(zbar[0], z(i)));
      gens.push_back(fs[i].scale(c_fi) + fs[1].scale(c_f1) + fs[0].scale(c_f0));
    }
  } else {
    // all 3x3 minors of M at zbar, row triples in lex order
    auto zrow = [&](uint32_t r, uint32_t col) -> FieldElem {
      // columns 0,1 of row r: (-z_{r-1}, z_r)
      if (col == 0) return r == 0 ? F->zero() : F->neg(zbar[r - 1]);
      return r == d ? F->zero() : zbar[r];
    };
    for (uint32_t a = 0; a <= d; ++a)
      for (uint32_t b = a + 1; b <= d; ++b)
        for (uint32_t c = b + 1; c <= d; ++c) {
          // det of [[za0, za1, fa], [zb0, zb1, fb], [zc0, zc1, fc]]
          FieldElem A = zrow(a, 0), B = zrow(a, 1);
          FieldElem C = zrow(b, 0), D = zrow(b, 1);
          FieldElem E = zrow(c, 0), G = zrow(c, 1);
          FieldElem cof_fa = F->sub(F->mul(C, G), F->mul(D, E));
          FieldElem cof_fb = F->neg(F->sub(F->mul(A, G), F->mul(B, E)));
          FieldElem cof_fc = F->sub(F->mul(A, D), F->mul(B, C));
          MultiPoly m = fs[a].scale(cof_fa) + fs[b].scale(cof_fb) + fs[c].scale(cof_fc);
          if (!m.is_zero()) gens.push_back(std::move(m));
        }
    if (gens.empty())
      throw Error(Errc::DegenerateForm, "all minors vanish identically at this zbar");
  }
  return QuadricSystem::make(div.n(), std::move(gens));
}

namespace {

// t_i = sum_{j<=i} x0^{i-j} x1^{d-1-i+j} f_j as polynomials
std::vector<MultiPoly> psi_components(const BidegreeDivisor& div) {
  const uint32_t d = div.d();
  const VarSpec vs = div.varspec();
  auto F = div.field();
  std::vector<MultiPoly> t;
  for (uint32_t i = 0; i < d; ++i) {
    MultiPoly acc(vs, F);
    for (uint32_t j = 0; j <= i; ++j) {
      Exp e(vs.total(), 0);
      e[0] = (uint16_t)(i - j);
      e[1] = (uint16_t)(d - 1 - i + j);
      MultiPoly mon = MultiPoly::monomial(vs, F, e, F->one());
      acc = acc + mon * div.f(j);
    }
    t.push_back(std::move(acc));
  }
  return t;
}

}  // namespace

ProductPoint psi_apply(const BidegreeDivisor& div, const ProductPoint& p) {
  auto F = div.field();
  if (p.blocks.size() != 2 || p.blocks[0].size() != 2 || p.blocks[1].size() != div.n() + 1)
    throw Error(Errc::BadInput, "point has wrong shape for this divisor");
  std::vector<FieldElem> flat = p.flat();
  if (!F->is_zero(div.equation().eval(flat)))
    throw Error(Errc::NotOnVariety, "psi needs a point on the divisor");
  auto t = psi_components(div);
  std::vector<FieldElem> zb;
  bool all_zero = true;
  for (const auto& ti : t) {
    FieldElem v = ti.eval(flat);
    if (!F->is_zero(v)) all_zero = false;
    zb.push_back(v);
  }
  if (all_zero) throw Error(Errc::IndeterminacyLocus, "all psi components vanish at this point");
  return ProductPoint::make(F, {std::move(zb), p.blocks[1]});
}

std::vector<MultiPoly> strict_transform(const BidegreeDivisor& div,
                                        const std::vector<FieldElem>& zbar) {
  const uint32_t d = div.d();
  if (d < 2) throw Error(Errc::DegreeTooSmall, "strict transform needs d >= 2");
  if (zbar.size() != d) throw Error(Errc::BadInput, "zbar must have length d");
  auto F = div.field();
  uint32_t pivot = d;
  for (uint32_t i = 0; i < d; ++i) {
    if (!F->is_zero(zbar[i])) {
      pivot = i;
      break;
    }
  }
  if (pivot == d) throw Error(Errc::ZeroVector, "zbar must be nonzero");

  auto t = psi_components(div);
  std::vector<MultiPoly> out;
  for (uint32_t k = d; k-- > 0;) {
    if (k == pivot) continue;
    MultiPoly eq = t[pivot].scale(zbar[k]) - t[k].scale(zbar[pivot]);
    if (eq.is_zero()) continue;
    // strip the common x1-monomial factor (the paper divides by x1^{d-1-k})
    uint16_t v1 = UINT16_MAX;
    for (const auto& [e, c] : eq.terms()) {
      (void)c;
      v1 = std::min(v1, e[1]);
    }
    if (v1 > 0) {
      MultiPoly x1v = MultiPoly::variable(div.varspec(), F, 1, v1);
      eq = eq.divide_exact(x1v);
    }
    out.push_back(std::move(eq));
  }
  out.push_back(div.equation());
  return out;
}

ConeResult is_cone(const QuadricSystem& sys) {
  auto F = sys.field();
  const uint32_t m = sys.n() + 1;
  // stack all Gram matrices and compute the kernel by Gaussian elimination
  std::vector<std::vector<FieldElem>> rows;
  for (const auto& g : sys.grams())
    for (const auto& r : g) rows.push_back(r);
  // row reduce
  uint32_t rank = 0;
  std::vector<int> pivot_col;
  for (uint32_t col = 0; col < m && rank < rows.size(); ++col) {
    size_t piv = rows.size();
    for (size_t r = rank; r < rows.size(); ++r) {
      if (!F->is_zero(rows[r][col])) {
        piv = r;
        break;
      }
    }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    FieldElem inv = F->inv(rows[rank][col]);
    for (auto& v : rows[rank]) v = F->mul(v, inv);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || F->is_zero(rows[r][col])) continue;
      FieldElem factor = rows[r][col];
      for (uint32_t c = 0; c < m; ++c)
        rows[r][c] = F->sub(rows[r][c], F->mul(factor, rows[rank][c]));
    }
    pivot_col.push_back((int)col);
    ++rank;
  }
  ConeResult res;
  // free columns give the kernel basis
  std::vector<bool> is_pivot(m, false);
  for (int c : pivot_col) is_pivot[c] = true;
  for (uint32_t free_col = 0; free_col < m; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<FieldElem> v(m, F->zero());
    v[free_col] = F->one();
    for (uint32_t r = 0; r < rank; ++r)
      v[pivot_col[r]] = F->neg(rows[r][free_col]);
    res.vertex_basis.push_back(std::move(v));
  }
  res.is_cone = !res.vertex_basis.empty();
  return res;
}

ProjectionResult project_from_point(const QuadricSystem& sys, const ProductPoint& p) {
  if (sys.quadrics().size() != 2)
    throw Error(Errc::WrongShape, "projection expects exactly two quadrics");
  auto F = sys.field();
  const uint32_t m = sys.n() + 1;
  if (p.blocks.size() != 1 || p.blocks[0].size() != m)
    throw Error(Errc::BadInput, "point has wrong shape");
  const auto& ph = p.blocks[0];
  for (const auto& q : sys.quadrics())
    if (!F->is_zero(q.eval(ph))) throw Error(Errc::NotOnVariety, "center must lie on both quadrics");

  // Jacobian rank at p must be 2: gradients 2 G_i p
  std::vector<std::vector<FieldElem>> grads;
  for (const auto& g : sys.grams()) {
    std::vector<FieldElem> row(m, F->zero());
    for (uint32_t i = 0; i < m; ++i) {
      FieldElem acc = F->zero();
      for (uint32_t j = 0; j < m; ++j) acc = F->add(acc, F->mul(g[i][j], ph[j]));
      row[i] = F->add(acc, acc);
    }
    grads.push_back(std::move(row));
  }
  // rank of the 2 x m gradient matrix
  {
    int rank = 0;
    std::vector<std::vector<FieldElem>> rr = grads;
    for (uint32_t col = 0, rk = 0; col < m && rk < 2; ++col) {
      size_t piv = 2;
      for (size_t r = rk; r < 2; ++r)
        if (!F->is_zero(rr[r][col])) {
          piv = r;
          break;
        }
      if (piv == 2) continue;
      std::swap(rr[rk], rr[piv]);
      FieldElem inv = F->inv(rr[rk][col]);
      for (auto& v : rr[rk]) v = F->mul(v, inv);
      for (size_t r = 0; r < 2; ++r) {
        if (r == rk) continue;
        FieldElem f2 = rr[r][col];
        for (uint32_t c = 0; c < m; ++c) rr[r][c] = F->sub(rr[r][c], F->mul(f2, rr[rk][c]));
      }
      ++rk;
      rank = (int)rk;
    }
    if (rank < 2) throw Error(Errc::SingularCenter, "center is a singular point of the intersection");
  }

  // basis change: columns e_{sigma(0)}, ..., e_{sigma(n-1)}, p
  size_t lead = 0;
  while (lead < m && F->is_zero(ph[lead])) ++lead;
  std::vector<std::vector<FieldElem>> B(m, std::vector<FieldElem>(m, F->zero()));
  uint32_t col = 0;
  for (uint32_t r = 0; r < m; ++r) {
    if (r == lead) continue;
    B[r][col] = F->one();
    ++col;
  }
  for (uint32_t r = 0; r < m; ++r) B[r][m - 1] = ph[r];

  // transformed quadrics Q_i(B w) in variables w_0..w_n, then split off w_n
  const VarSpec vs_w{0, m};
  std::vector<MultiPoly> images(m, MultiPoly::zero(vs_w, F));
  for (uint32_t r = 0; r < m; ++r) {
    MultiPoly acc(vs_w, F);
    for (uint32_t c = 0; c < m; ++c) {
      if (F->is_zero(B[r][c])) continue;
      acc = acc + MultiPoly::variable(vs_w, F, c).scale(B[r][c]);
    }
    images[r] = acc;
  }
  const VarSpec vs_low{0, m - 1};
  std::vector<MultiPoly> L(2, MultiPoly::zero(vs_low, F)), A(2, MultiPoly::zero(vs_low, F));
  for (int qi = 0; qi < 2; ++qi) {
    MultiPoly t = sys.quadrics()[qi].map_variables(vs_w, images);
    for (const auto& [e, c] : t.terms()) {
      uint16_t en = e[m - 1];
      if (en >= 2) throw Error(Errc::NotOnVariety, "center not eliminated (unreachable)");
      Exp low(e.begin(), e.end() - 1);
      if (en == 1)
        L[qi].add_term(low, c);
      else
        A[qi].add_term(low, c);
    }
  }
  ProjectionResult res;
  res.change = B;
  res.L1 = L[0];
  res.A1 = A[0];
  res.L2 = L[1];
  res.A2 = A[1];
  res.cubic = A[0] * L[1] - A[1] * L[0];
  if (res.cubic.is_zero())
    throw Error(Errc::DegenerateProjection, "projection image degenerates (cubic vanishes)");
  return res;
}

namespace {

// Jacobian rank at a point for a quadric system over a finite field, on raw
// codes. grams_codes[q][i][j] are field codes.
int jac_rank_at(const Field& F, const std::vector<std::vector<std::vector<uint32_t>>>& grams,
                const std::vector<uint32_t>& y) {
  const size_t c = grams.size();
  const size_t m = y.size();
  std::vector<std::vector<uint32_t>> rows(c, std::vector<uint32_t>(m, 0));
  for (size_t qi = 0; qi < c; ++qi)
    for (size_t i = 0; i < m; ++i) {
      uint32_t acc = 0;
      for (size_t j = 0; j < m; ++j) acc = F.fadd(acc, F.fmul(grams[qi][i][j], y[j]));
      rows[qi][i] = F.fadd(acc, acc);
    }
  size_t rank = 0;
  for (size_t col = 0; col < m && rank < c; ++col) {
    size_t piv = c;
    for (size_t r = rank; r < c; ++r)
      if (rows[r][col]) {
        piv = r;
        break;
      }
    if (piv == c) continue;
    std::swap(rows[rank], rows[piv]);
    uint32_t inv = F.finv(rows[rank][col]);
    for (auto& v : rows[rank]) v = F.fmul(v, inv);
    for (size_t r = 0; r < c; ++r) {
      if (r == rank || !rows[r][col]) continue;
      uint32_t f2 = rows[r][col];
      for (size_t cc = 0; cc < m; ++cc) rows[r][cc] = F.fsub(rows[r][cc], F.fmul(f2, rows[rank][cc]));
    }
    ++rank;
  }
  return (int)rank;
}

struct FqQuadricSystem {
  FieldPtr F;
  std::vector<std::vector<std::vector<uint32_t>>> grams;
};

FqQuadricSystem codes_over(const QuadricSystem& sys, const FieldPtr& Fq) {
  FqQuadricSystem out;
  out.F = Fq;
  auto src = sys.field();
  const uint32_t m = sys.n() + 1;
  std::vector<uint32_t> basis;
  if (src->finite() && src->q() != Fq->q() && src->kind() == FieldKind::Extension)
    basis = src->embedding_into(*Fq);
  for (const auto& g : sys.grams()) {
    std::vector<std::vector<uint32_t>> gc(m, std::vector<uint32_t>(m, 0));
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = 0; j < m; ++j) {
        const FieldElem& e = g[i][j];
        if (!src->finite()) {
          gc[i][j] = (uint32_t)Fq->from_rat(e.rat()).code();
        } else if (basis.empty()) {
          gc[i][j] = (uint32_t)e.code();  // prime subfield embeds as constants
        } else {
          uint32_t code = (uint32_t)e.code(), acc = 0;
          for (size_t bi = 0; bi < basis.size(); ++bi) {
            acc = Fq->fadd(acc, Fq->fmul(code % src->p(), basis[bi]));
            code /= src->p();
          }
          gc[i][j] = acc;
        }
      }
    out.grams.push_back(std::move(gc));
  }
  return out;
}

// singular point over Fq? returns the witness representative if found
std::optional<std::vector<uint32_t>> scan_singular(const FqQuadricSystem& s, unsigned threads) {
  const auto& F = *s.F;
  const uint32_t m = (uint32_t)s.grams.front().size();
  const size_t codim = s.grams.size();
  // chunk over the leading-one position
  std::vector<std::optional<std::vector<uint32_t>>> found(m);
  run_chunks(m, threads, [&](size_t k_) {
    uint32_t k = (uint32_t)(m - 1 - k_);  // any order; reduce deterministically below
    std::vector<uint32_t> v(m, 0);
    v[k] = 1;
    const uint32_t free_ct = m - 1 - k;
    uint64_t total = 1;
    for (uint32_t i = 0; i < free_ct; ++i) total *= F.q();
    for (uint64_t code = 0; code < total; ++code) {
      uint64_t c = code;
      for (uint32_t i = free_ct; i-- > 0;) {
        v[k + 1 + i] = (uint32_t)(c % F.q());
        c /= F.q();
      }
      bool on = true;
      for (size_t qi = 0; qi < codim && on; ++qi) {
        // value = y^T G y
        uint32_t acc = 0;
        for (uint32_t i = 0; i < m; ++i) {
          if (!v[i]) continue;
          uint32_t row = 0;
          for (uint32_t j = 0; j < m; ++j) {
            if (!v[j]) continue;
            row = F.fadd(row, F.fmul(s.grams[qi][i][j], F.fmul(v[i], v[j])));
          }
          acc = F.fadd(acc, row);
        }
        if (acc != 0) on = false;
      }
      if (!on) continue;
      if (jac_rank_at(F, s.grams, v) < (int)codim) {
        if (!found[k_]) found[k_] = v;
        return;
      }
    }
  });
  for (const auto& f : found)
    if (f) return f;
  return std::nullopt;
}

std::vector<FieldPtr> good_primes_for(const std::vector<MultiPoly>& polys, size_t count) {
  std::vector<FieldPtr> out;
  for (uint32_t p = 3; out.size() < count && p < 1000; p += 2) {
    if (!is_prime_u32(p)) continue;
    try {
      auto Fp = Field::make(FieldSpec::prime(p));
      bool ok = true;
      for (const auto& poly : polys) {
        MultiPoly r = change_field(poly, Fp);
        if (r.is_zero() != poly.is_zero() || r.total_degree() != poly.total_degree()) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(Fp);
    } catch (const Error&) {
      continue;  // denominator divisible by p
    }
  }
  return out;
}

}  // namespace

SmoothnessReport smoothness_check(const QuadricSystem& sys, int check_level, unsigned threads) {
  if (threads == 0) threads = default_threads();
  SmoothnessReport rep;
  rep.check_level = check_level;
  auto F = sys.field();
  if (F->finite()) {
    rep.certified = true;
    auto codes = codes_over(sys, F);
    auto witness = scan_singular(codes, threads);
    if (witness) {
      rep.verdict = Smoothness::Singular;
      std::string w = "singular at [";
      for (size_t i = 0; i < witness->size(); ++i)
        w += (i ? ":" : "") + std::to_string((*witness)[i]);
      rep.detail.push_back(w + "] over F_" + std::to_string(F->q()));
      return rep;
    }
    if (check_level >= 2) {
      FieldSpec ext = (F->kind() == FieldKind::Prime)
                          ? FieldSpec::extension(F->p(), 2)
                          : FieldSpec::extension(F->p(), 2 * F->deg());
      auto F2 = Field::make(ext);
      auto codes2 = codes_over(sys, F2);
      auto witness2 = scan_singular(codes2, threads);
      if (witness2) {
        rep.verdict = Smoothness::Singular;
        rep.detail.push_back("singular point over F_" + std::to_string(F2->q()));
        return rep;
      }
    }
    rep.verdict = Smoothness::Smooth;
    return rep;
  }
  // rationals: reduce modulo the first three good primes (heuristic only)
  rep.certified = false;
  auto primes = good_primes_for(sys.quadrics(), 3);
  for (const auto& Fp : primes) {
    std::vector<MultiPoly> reduced;
    for (const auto& q : sys.quadrics()) reduced.push_back(change_field(q, Fp));
    QuadricSystem rsys = QuadricSystem::make(sys.n(), std::move(reduced));
    auto sub = smoothness_check(rsys, check_level, threads);
    rep.detail.push_back("mod " + std::to_string(Fp->p()) + ": " +
                         (sub.verdict == Smoothness::Smooth ? "smooth" : "singular"));
    if (sub.verdict != Smoothness::Smooth) {
      rep.verdict = Smoothness::HeuristicSingular;
      return rep;
    }
  }
  rep.verdict = Smoothness::HeuristicSmooth;
  return rep;
}

SmoothnessReport smoothness_check(const BidegreeDivisor& div, int check_level, unsigned threads) {
  if (threads == 0) threads = default_threads();
  SmoothnessReport rep;
  rep.check_level = check_level;
  auto F = div.field();
  if (!F->finite()) {
    rep.certified = false;
    auto primes = good_primes_for(div.fs(), 3);
    for (const auto& Fp : primes) {
      std::vector<MultiPoly> reduced;
      for (const auto& fi : div.fs()) reduced.push_back(change_field(fi, Fp));
      auto rdiv = BidegreeDivisor::make(div.d(), div.n(), std::move(reduced), Fp);
      auto sub = smoothness_check(rdiv, check_level, threads);
      rep.detail.push_back("mod " + std::to_string(Fp->p()) + ": " +
                           (sub.verdict == Smoothness::Smooth ? "smooth" : "singular"));
      if (sub.verdict != Smoothness::Smooth) {
        rep.verdict = Smoothness::HeuristicSingular;
        return rep;
      }
    }
    rep.verdict = Smoothness::HeuristicSmooth;
    return rep;
  }
  rep.certified = true;
  auto scan = [&](const FieldPtr& Fq) -> bool {
    // true iff smooth over Fq: no point of the divisor with vanishing full
    // gradient (both blocks)
    MultiPoly eq = div.equation();
    if (Fq->q() != F->q()) eq = change_field(eq, Fq);
    std::vector<MultiPoly> grads;
    for (uint32_t v = 0; v < div.varspec().total(); ++v) grads.push_back(eq.derivative(v));
    bool smooth = product_proj_stream(
        {2, div.n() + 1}, *Fq, [&](const std::vector<std::vector<uint32_t>>& tup) {
          std::vector<FieldElem> flat;
          for (const auto& blk : tup)
            for (uint32_t c : blk) flat.push_back(FieldElem::finite(c));
          if (!Fq->is_zero(eq.eval(flat))) return true;
          for (const auto& g : grads)
            if (!Fq->is_zero(g.eval(flat))) return true;
          return false;  // singular point found: stop
        });
    return smooth;
  };
  if (!scan(F)) {
    rep.verdict = Smoothness::Singular;
    rep.detail.push_back("singular point over F_" + std::to_string(F->q()));
    return rep;
  }
  if (check_level >= 2) {
    FieldSpec ext = (F->kind() == FieldKind::Prime) ? FieldSpec::extension(F->p(), 2)
                                                    : FieldSpec::extension(F->p(), 2 * F->deg());
    auto F2 = Field::make(ext);
    if (!scan(F2)) {
      rep.verdict = Smoothness::Singular;
      rep.detail.push_back("singular point over F_" + std::to_string(F2->q()));
      return rep;
    }
  }
  rep.verdict = Smoothness::Smooth;
  return rep;
}

}  // namespace qb
