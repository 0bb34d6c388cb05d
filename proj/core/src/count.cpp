#include "qb/count.hpp"

#include <algorithm>
#include <numeric>

namespace qb {

const char* count_method_name(CountMethod m) {
  switch (m) {
    case CountMethod::BruteForce: return "BruteForce";
    case CountMethod::FiberwiseFormula: return "FiberwiseFormula";
    case CountMethod::Hybrid: return "Hybrid";
  }
  return "?";
}

ProductSystem ProductSystem::from_bundle(const QuadricBundle& b) {
  ProductSystem s;
  s.block_lens = {b.varspec().nx, b.varspec().ny};
  s.polys = {b.equation()};
  s.field = b.field();
  return s;
}

ProductSystem ProductSystem::from_divisor(const BidegreeDivisor& d) {
  ProductSystem s;
  s.block_lens = {2, d.n() + 1};
  s.polys = {d.equation()};
  s.field = d.field();
  return s;
}

ProductSystem ProductSystem::from_quadrics(const QuadricSystem& q) {
  ProductSystem s;
  s.block_lens = {q.n() + 1};
  s.polys = q.quadrics();
  s.field = q.field();
  return s;
}

namespace {

// Compiled form of a poly for fast finite-field evaluation: terms grouped by
// the first block's exponents.
struct FqStagedPoly {
  struct YTerm {
    uint32_t coeff;
    std::vector<std::pair<uint32_t, uint16_t>> yexp;  // (y index, exponent)
  };
  std::vector<std::vector<std::pair<uint32_t, uint16_t>>> xexps;  // sparse x monomials
  std::vector<std::vector<YTerm>> groups;                         // per x monomial
};

FqStagedPoly stage_fq(const MultiPoly& p, uint32_t nx) {
  FqStagedPoly out;
  std::map<Exp, size_t> seen;
  for (const auto& [e, c] : p.terms()) {
    Exp xe(e.begin(), e.begin() + nx);
    auto it = seen.find(xe);
    size_t idx;
    if (it == seen.end()) {
      idx = out.xexps.size();
      seen.emplace(xe, idx);
      std::vector<std::pair<uint32_t, uint16_t>> sparse;
      for (uint32_t v = 0; v < nx; ++v)
        if (xe[v]) sparse.emplace_back(v, xe[v]);
      out.xexps.push_back(std::move(sparse));
      out.groups.emplace_back();
    } else {
      idx = it->second;
    }
    FqStagedPoly::YTerm t;
    t.coeff = (uint32_t)c.code();
    for (uint32_t v = nx; v < e.size(); ++v)
      if (e[v]) t.yexp.emplace_back(v - nx, e[v]);
    out.groups[idx].push_back(std::move(t));
  }
  return out;
}

}  // namespace

CountReport count_points_fq(const ProductSystem& sys, unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  auto F = sys.field;
  if (!F->finite()) throw Error(Errc::InfiniteField, "finite-field count needs a finite field");
  if (threads == 0) threads = default_threads();
  CountReport rep;
  rep.method = CountMethod::BruteForce;
  rep.field = F->spec();

  if (sys.block_lens.size() == 1) {
    const uint32_t m = sys.block_lens[0];
    // single block: chunk over the leading-one position
    auto counts = map_chunks<uint64_t>(m, threads, [&](size_t lead_) {
      uint32_t k = (uint32_t)lead_;
      uint64_t cnt = 0;
      std::vector<FieldElem> flat(m, F->zero());
      std::vector<uint32_t> v(m, 0);
      v[k] = 1;
      const uint32_t free_ct = m - 1 - k;
      uint64_t total = 1;
      for (uint32_t i = 0; i < free_ct; ++i) total *= F->q();
      for (uint64_t code = 0; code < total; ++code) {
        uint64_t c = code;
        for (uint32_t i = free_ct; i-- > 0;) {
          v[k + 1 + i] = (uint32_t)(c % F->q());
          c /= F->q();
        }
        for (uint32_t i = 0; i < m; ++i) flat[i] = FieldElem::finite(v[i]);
        bool on = true;
        for (const auto& p : sys.polys)
          if (!F->is_zero(p.eval(flat))) {
            on = false;
            break;
          }
        if (on) ++cnt;
      }
      return cnt;
    });
    rep.count = std::accumulate(counts.begin(), counts.end(), (uint64_t)0);
    rep.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    return rep;
  }

  if (sys.block_lens.size() != 2)
    throw Error(Errc::NotSupported, "counting supports one or two blocks");
  const uint32_t nx = sys.block_lens[0], ny = sys.block_lens[1];

  std::vector<FqStagedPoly> staged;
  for (const auto& p : sys.polys) staged.push_back(stage_fq(p, nx));
  auto xreps = proj_reps(nx, *F);

  auto counts = map_chunks<uint64_t>(xreps.size(), threads, [&](size_t xi) {
    const auto& x = xreps[xi];
    // specialize each poly at x: dense y-quadratic-ish coefficient lists
    struct YPoly {
      std::vector<std::pair<std::vector<std::pair<uint32_t, uint16_t>>, uint32_t>> terms;
    };
    std::vector<YPoly> ypolys;
    uint16_t max_exp = 1;
    for (const auto& sp : staged) {
      std::map<std::vector<std::pair<uint32_t, uint16_t>>, uint32_t> acc;
      for (size_t g = 0; g < sp.xexps.size(); ++g) {
        uint32_t xval = 1;
        for (auto [v, e] : sp.xexps[g]) xval = F->fmul(xval, F->fpow(x[v], e));
        if (xval == 0) continue;
        for (const auto& t : sp.groups[g]) {
          uint32_t add = F->fmul(xval, t.coeff);
          auto [it, fresh] = acc.emplace(t.yexp, add);
          if (!fresh) it->second = F->fadd(it->second, add);
          for (auto [v, e] : t.yexp) max_exp = std::max(max_exp, e);
        }
      }
      YPoly yp;
      for (auto& [ye, c] : acc)
        if (c) yp.terms.emplace_back(ye, c);
      ypolys.push_back(std::move(yp));
    }
    // enumerate y representatives
    uint64_t cnt = 0;
    std::vector<std::vector<uint32_t>> pows(ny, std::vector<uint32_t>(max_exp + 1, 1));
    for_each_proj_rep(ny, *F, [&](const std::vector<uint32_t>& y) {
      for (uint32_t i = 0; i < ny; ++i) {
        uint32_t pv = 1;
        for (uint16_t e = 1; e <= max_exp; ++e) {
          pv = F->fmul(pv, y[i]);
          pows[i][e] = pv;
        }
      }
      for (const auto& yp : ypolys) {
        uint32_t acc = 0;
        for (const auto& [ye, c] : yp.terms) {
          uint32_t t = c;
          for (auto [v, e] : ye) t = F->fmul(t, pows[v][e]);
          acc = F->fadd(acc, t);
        }
        if (acc != 0) return true;
      }
      ++cnt;
      return true;
    });
    return cnt;
  });
  rep.count = std::accumulate(counts.begin(), counts.end(), (uint64_t)0);
  rep.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  return rep;
}

uint64_t quadric_point_count(uint64_t q, uint32_t m, uint32_t r, int eta) {
  if (r == 0) return proj_space_size(m, q);
  auto qpow = [&](uint32_t e) {
    uint64_t v = 1;
    for (uint32_t i = 0; i < e; ++i) v *= q;
    return v;
  };
  uint64_t affine;
  if (r % 2 == 1) {
    affine = qpow(m - 1);
  } else {
    uint64_t main = qpow(m - 1);
    uint64_t corr = (q - 1) * qpow(m - r / 2 - 1);
    affine = eta >= 0 ? main + corr : main - corr;
    if (eta == 0) affine = main;  // unreachable for even rank; keep total
  }
  return (affine - 1) / (q - 1);
}

QuadraticFormClass classify_quadric(const Field& F,
                                    const std::vector<std::vector<uint32_t>>& gram) {
  // symmetric congruence diagonalization, char != 2
  auto g = gram;
  const uint32_t m = (uint32_t)g.size();
  std::vector<uint32_t> diag;
  std::vector<bool> used(m, false);
  for (;;) {
    // find a usable pivot on the diagonal
    int piv = -1;
    for (uint32_t i = 0; i < m; ++i)
      if (!used[i] && g[i][i] != 0) {
        piv = (int)i;
        break;
      }
    if (piv < 0) {
      // look for a nonzero off-diagonal entry among unused rows
      int a = -1, b = -1;
      for (uint32_t i = 0; i < m && a < 0; ++i) {
        if (used[i]) continue;
        for (uint32_t j = i + 1; j < m && a < 0; ++j) {
          if (used[j]) continue;
          if (g[i][j] != 0) {
            a = (int)i;
            b = (int)j;
          }
        }
      }
      if (a < 0) break;  // all remaining entries vanish
      // row/col operation: add row b to row a (and col b to col a) to create
      // a nonzero diagonal entry (valid since char != 2)
      for (uint32_t j = 0; j < m; ++j) g[a][j] = F.fadd(g[a][j], g[b][j]);
      for (uint32_t i = 0; i < m; ++i) g[i][a] = F.fadd(g[i][a], g[i][b]);
      continue;
    }
    used[piv] = true;
    diag.push_back(g[piv][piv]);
    uint32_t inv = F.finv(g[piv][piv]);
    // clear row/column piv against unused indices
    for (uint32_t i = 0; i < m; ++i) {
      if (used[i] || g[i][piv] == 0) continue;
      uint32_t factor = F.fmul(g[i][piv], inv);
      for (uint32_t j = 0; j < m; ++j) g[i][j] = F.fsub(g[i][j], F.fmul(factor, g[piv][j]));
      for (uint32_t j = 0; j < m; ++j) g[j][i] = F.fsub(g[j][i], F.fmul(factor, g[j][piv]));
    }
  }
  QuadraticFormClass cls;
  cls.rank = (uint32_t)diag.size();
  if (cls.rank % 2 == 0 && cls.rank > 0) {
    uint32_t det = 1;
    for (uint32_t d : diag) det = F.fmul(det, d);
    // (-1)^(r/2) * det
    if ((cls.rank / 2) % 2 == 1) det = F.fneg(det);
    cls.eta = F.quad_character(FieldElem::finite(det));
  }
  return cls;
}

CountReport count_fiberwise_fast(const QuadricBundle& b, CountMethod method, unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  auto F = b.field();
  if (!F->finite()) throw Error(Errc::InfiniteField, "finite-field count needs a finite field");
  if (b.base_dim() != 1) throw Error(Errc::WrongShape, "fiberwise counting runs over P^1 bases");
  if (threads == 0) threads = default_threads();

  const uint32_t m = b.fiber_dim() + 2;
  PolyMatrix gram = b.gram();
  auto xreps = proj_reps(2, *F);
  auto counts = map_chunks<uint64_t>(xreps.size(), threads, [&](size_t xi) {
    std::vector<FieldElem> flat(b.varspec().total(), F->zero());
    flat[0] = FieldElem::finite(xreps[xi][0]);
    flat[1] = FieldElem::finite(xreps[xi][1]);
    std::vector<std::vector<uint32_t>> g(m, std::vector<uint32_t>(m, 0));
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = 0; j < m; ++j)
        g[i][j] = (uint32_t)gram.at(i, j).eval(flat).code();
    auto cls = classify_quadric(*F, g);
    return quadric_point_count(F->q(), m, cls.rank, cls.eta);
  });
  CountReport rep;
  rep.method = method;
  rep.field = F->spec();
  rep.count = std::accumulate(counts.begin(), counts.end(), (uint64_t)0);
  if (method == CountMethod::Hybrid) {
    auto brute = count_points_fq(ProductSystem::from_bundle(b), threads);
    if (brute.count != rep.count)
      throw Error(Errc::BadInput, "hybrid disagreement: formula " + std::to_string(rep.count) +
                                      " vs brute force " + std::to_string(brute.count));
  } else if (method == CountMethod::BruteForce) {
    rep = count_points_fq(ProductSystem::from_bundle(b), threads);
  }
  rep.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  return rep;
}

uint64_t validate_quadric_formula(uint32_t p, unsigned threads) {
  if (threads == 0) threads = default_threads();
  auto F = Field::make(FieldSpec::prime(p));
  uint64_t checked = 0;
  for (uint32_t m = 2; m <= 4; ++m) {
    // monomials y_i y_j, i <= j
    std::vector<std::pair<uint32_t, uint32_t>> mono;
    for (uint32_t i = 0; i < m; ++i)
      for (uint32_t j = i; j < m; ++j) mono.emplace_back(i, j);
    const size_t nc = mono.size();
    // representative monomial values
    auto reps = proj_reps(m, *F);
    std::vector<uint32_t> mvals(reps.size() * nc);
    for (size_t r = 0; r < reps.size(); ++r)
      for (size_t k = 0; k < nc; ++k)
        mvals[r * nc + k] = F->fmul(reps[r][mono[k].first], reps[r][mono[k].second]);

    uint64_t total_forms = 1;
    for (size_t k = 0; k < nc; ++k) total_forms *= p;
    // chunk over the leading three coefficients
    uint64_t lead_space = (uint64_t)p * p * p;
    uint64_t tail_space = total_forms / lead_space;
    auto sums = map_chunks<uint64_t>(lead_space, threads, [&](size_t lead) {
      std::vector<uint32_t> c(nc, 0);
      c[0] = (uint32_t)(lead % p);
      c[1] = (uint32_t)(lead / p % p);
      c[2] = (uint32_t)(lead / p / p % p);
      uint64_t done = 0;
      const uint32_t half_inv = F->finv(2);
      std::vector<std::vector<uint32_t>> g(m, std::vector<uint32_t>(m));
      for (uint64_t tail = 0; tail < tail_space; ++tail) {
        uint64_t t = tail;
        for (size_t k = 3; k < nc; ++k) {
          c[k] = (uint32_t)(t % p);
          t /= p;
        }
        // brute count over representatives
        uint64_t brute = 0;
        const uint32_t* mv = mvals.data();
        for (size_t r = 0; r < reps.size(); ++r, mv += nc) {
          uint64_t acc = 0;
          for (size_t k = 0; k < nc; ++k) acc += (uint64_t)c[k] * mv[k];
          if (acc % p == 0) ++brute;
        }
        // formula count
        for (uint32_t i = 0; i < m; ++i)
          for (uint32_t j = 0; j < m; ++j) g[i][j] = 0;
        for (size_t k = 0; k < nc; ++k) {
          auto [i, j] = mono[k];
          if (i == j) {
            g[i][i] = c[k];
          } else {
            uint32_t hv = F->fmul(c[k], half_inv);
            g[i][j] = hv;
            g[j][i] = hv;
          }
        }
        auto cls = classify_quadric(*F, g);
        uint64_t formula = quadric_point_count(p, m, cls.rank, cls.eta);
        if (formula != brute)
          throw Error(Errc::BadInput, "quadric formula mismatch at p=" + std::to_string(p) +
                                          " m=" + std::to_string(m));
        ++done;
      }
      return done;
    });
    checked += std::accumulate(sums.begin(), sums.end(), (uint64_t)0);
  }
  return checked;
}

// ---------- rational points of bounded height ----------

bool height_stream(const std::vector<uint32_t>& block_lens, const HeightWindow& window,
                   const std::function<bool(const ProductPoint&, long long)>& fn,
                   const FieldPtr& field) {
  return product_height_stream(
      block_lens, window.bound, window.convention,
      [&](const std::vector<std::vector<long long>>& blocks, long long h) {
        for (auto [bi, ci] : window.nonzero)
          if (blocks[bi][ci] == 0) return true;
        std::vector<std::vector<FieldElem>> fe;
        for (const auto& blk : blocks) {
          std::vector<FieldElem> b;
          for (long long v : blk) b.push_back(field->from_int(v));
          fe.push_back(std::move(b));
        }
        return fn(ProductPoint::make(field, std::move(fe)), h);
      });
}

namespace {

// staged integer-coefficient representation for the two-stage membership test
template <class I>
struct StagedQ {
  struct Group {
    std::vector<std::pair<uint32_t, uint16_t>> xexp;
    std::vector<std::pair<I, std::vector<std::pair<uint32_t, uint16_t>>>> yterms;
  };
  std::vector<Group> groups;
};

template <class I>
StagedQ<I> stage_q(const MultiPoly& p, uint32_t nx) {
  // clear denominators
  Int lcm = 1;
  for (const auto& [e, c] : p.terms()) {
    (void)e;
    Int den = rat_den(c.rat());
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  StagedQ<I> out;
  std::map<Exp, size_t> seen;
  for (const auto& [e, c] : p.terms()) {
    Exp xe(e.begin(), e.begin() + nx);
    auto it = seen.find(xe);
    size_t idx;
    if (it == seen.end()) {
      idx = out.groups.size();
      seen.emplace(xe, idx);
      typename StagedQ<I>::Group g;
      for (uint32_t v = 0; v < nx; ++v)
        if (xe[v]) g.xexp.emplace_back(v, xe[v]);
      out.groups.push_back(std::move(g));
    } else {
      idx = it->second;
    }
    Int ic = rat_num(c.rat()) * (lcm / rat_den(c.rat()));
    std::vector<std::pair<uint32_t, uint16_t>> ye;
    for (uint32_t v = nx; v < e.size(); ++v)
      if (e[v]) ye.emplace_back(v - nx, e[v]);
    I coef;
    if constexpr (std::is_same_v<I, long long>)
      coef = ic.convert_to<long long>();
    else
      coef = ic;
    out.groups[idx].yterms.emplace_back(std::move(coef), std::move(ye));
  }
  return out;
}

// worst-case |value| bound for the two-stage evaluation at |coords| <= B
Int stage_bound(const MultiPoly& p, long long B) {
  Int lcm = 1;
  for (const auto& [e, c] : p.terms()) {
    (void)e;
    Int den = rat_den(c.rat());
    lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
  }
  Int bound = 0;
  for (const auto& [e, c] : p.terms()) {
    Int term = boost::multiprecision::abs(rat_num(c.rat())) * (lcm / rat_den(c.rat()));
    for (uint16_t ev : e)
      for (uint16_t k = 0; k < ev; ++k) term *= B;
    bound += term;
  }
  return bound;
}

template <class I>
uint64_t count_height_core(const ProductSystem& sys, const HeightWindow& window,
                           unsigned threads) {
  const uint32_t nx = sys.block_lens[0], ny = sys.block_lens[1];
  const long long B = window.bound;
  std::vector<StagedQ<I>> staged;
  for (const auto& p : sys.polys) staged.push_back(stage_q<I>(p, nx));

  // x-side representatives with chart constraints applied
  std::vector<uint32_t> x_nonzero, y_nonzero;
  for (auto [bi, ci] : window.nonzero)
    (bi == 0 ? x_nonzero : y_nonzero).push_back(ci);
  std::vector<HeightRep> xreps_all = height_reps_upto(nx, B);
  std::vector<HeightRep> xreps;
  for (auto& r : xreps_all) {
    bool ok = true;
    for (uint32_t ci : x_nonzero)
      if (r.coords[ci] == 0) ok = false;
    if (ok) xreps.push_back(std::move(r));
  }
  // per poly and x-rep: the x-monomial values for every group
  std::vector<std::vector<std::vector<I>>> xmon(staged.size());
  for (size_t pi = 0; pi < staged.size(); ++pi) {
    xmon[pi].assign(xreps.size(), {});
    for (size_t xi = 0; xi < xreps.size(); ++xi) {
      std::vector<I> vals;
      vals.reserve(staged[pi].groups.size());
      for (const auto& g : staged[pi].groups) {
        I v = 1;
        for (auto [var, e] : g.xexp)
          for (uint16_t k = 0; k < e; ++k) v *= (I)xreps[xi].coords[var];
        vals.push_back(std::move(v));
      }
      xmon[pi][xi] = std::move(vals);
    }
  }

  uint16_t max_yexp = 1;
  for (const auto& sp : staged)
    for (const auto& g : sp.groups)
      for (const auto& [c, ye] : g.yterms)
        for (auto [v, e] : ye) max_yexp = std::max(max_yexp, e);

  HeightChunks chunks{ny, B, y_nonzero};
  auto sums = map_chunks<uint64_t>(chunks.chunk_count(), threads, [&](size_t ci) {
    uint64_t cnt = 0;
    std::vector<std::vector<I>> pows(ny, std::vector<I>(max_yexp + 1, 1));
    std::vector<std::vector<I>> valA(staged.size());
    chunks.enumerate(ci, [&](const std::vector<long long>& y) {
      long long hy = 0;
      for (long long v : y) hy = std::max(hy, v < 0 ? -v : v);
      // allowed x heights under the convention
      long long xcap =
          window.convention == HeightConvention::MaxOfFactors ? B : B / std::max(1ll, hy);
      if (xcap < 1) return;
      for (uint32_t i = 0; i < ny; ++i) {
        I pv = 1;
        for (uint16_t e = 1; e <= max_yexp; ++e) {
          pv *= (I)y[i];
          pows[i][e] = pv;
        }
      }
      for (size_t pi = 0; pi < staged.size(); ++pi) {
        auto& va = valA[pi];
        va.assign(staged[pi].groups.size(), I(0));
        for (size_t g = 0; g < staged[pi].groups.size(); ++g) {
          I acc = 0;
          for (const auto& [c, ye] : staged[pi].groups[g].yterms) {
            I t = c;
            for (auto [v, e] : ye) t *= pows[v][e];
            acc += t;
          }
          va[g] = std::move(acc);
        }
      }
      for (size_t xi = 0; xi < xreps.size(); ++xi) {
        if (xreps[xi].height > xcap) continue;
        if (window.convention == HeightConvention::MaxOfFactors) {
          // pair height is max(hx, hy) <= B: always true here
        }
        bool on = true;
        for (size_t pi = 0; pi < staged.size() && on; ++pi) {
          I acc = 0;
          const auto& mons = xmon[pi][xi];
          const auto& va = valA[pi];
          for (size_t g = 0; g < mons.size(); ++g) acc += mons[g] * va[g];
          if (acc != 0) on = false;
        }
        if (on) ++cnt;
      }
    });
    return cnt;
  });
  return std::accumulate(sums.begin(), sums.end(), (uint64_t)0);
}

}  // namespace

CountReport count_rational_height(const ProductSystem& sys, const HeightWindow& window,
                                  unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  if (sys.field->finite())
    throw Error(Errc::BadInput, "height counting runs over Q");
  if (threads == 0) threads = default_threads();
  CountReport rep;
  rep.method = CountMethod::BruteForce;
  rep.field = sys.field->spec();
  if (sys.block_lens.size() != 2)
    throw Error(Errc::NotSupported, "height counting supports two-block systems");

  // choose the integer width by a rigorous bound
  Int worst = 0;
  for (const auto& p : sys.polys) worst = std::max(worst, stage_bound(p, window.bound));
  if (worst < Int(1) << 62)
    rep.count = count_height_core<long long>(sys, window, threads);
  else
    rep.count = count_height_core<Int>(sys, window, threads);
  rep.elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  return rep;
}

}  // namespace qb
