#include "qb/bundle.hpp"

#include <algorithm>

namespace qb {

namespace {

Int binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

}  // namespace

QuadricBundle QuadricBundle::validate(uint32_t base_dim, uint32_t fiber_dim,
                                      std::vector<int> weights,
                                      std::map<std::pair<uint32_t, uint32_t>, MultiPoly> sigma,
                                      FieldPtr field) {
  if (base_dim < 1 || fiber_dim < 1)
    throw Error(Errc::BadInput, "need base_dim >= 1 and fiber_dim >= 1");
  const uint32_t m = fiber_dim + 2;  // fiber coordinates
  if (weights.size() != m)
    throw Error(Errc::BadInput, "expected " + std::to_string(m) + " weights");
  for (uint32_t i = 0; i + 1 < m; ++i)
    if (weights[i] < weights[i + 1])
      throw Error(Errc::WeightsUnsorted, "weights must be sorted descending");
  for (int w : weights)
    if (w < 0) throw Error(Errc::BadInput, "weights must be non-negative");

  QuadricBundle b;
  b.base_dim_ = base_dim;
  b.fiber_dim_ = fiber_dim;
  b.weights_ = std::move(weights);
  b.field_ = std::move(field);
  const VarSpec vs = b.varspec();
  b.zero_ = MultiPoly::zero(vs, b.field_);

  // normalize the table to i <= j, checking x-only entries
  for (auto& [ij, p] : sigma) {
    auto [i, j] = ij;
    if (i >= m || j >= m) throw Error(Errc::BadInput, "sigma index out of range");
    if (p.varspec() != vs) throw Error(Errc::VarSpecMismatch, "sigma entry has wrong varspec");
    if (p.is_zero()) continue;
    if (!p.is_x_only())
      throw Error(Errc::NotXOnly,
                  "sigma_{" + std::to_string(i) + "," + std::to_string(j) + "} must be x-only");
    auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = b.sigma_.find(key);
    if (it == b.sigma_.end())
      b.sigma_.emplace(key, p);
    else
      it->second = it->second + p;
  }

  // degree compatibility: one common c with d_{i,j} = a_i + a_j + c
  std::optional<int> common_c;
  Multidegree md;
  md.d.assign(m, std::vector<std::optional<int>>(m));
  for (const auto& [ij, p] : b.sigma_) {
    auto [i, j] = ij;
    if (p.is_zero()) continue;
    auto hd = p.homogeneous_degree_x();
    if (!hd)
      throw Error(Errc::NotHomogeneous,
                  "sigma_{" + std::to_string(i) + "," + std::to_string(j) + "} is not homogeneous");
    md.d[i][j] = *hd;
    int c = *hd - b.weights_[i] - b.weights_[j];
    if (!common_c) {
      common_c = c;
    } else if (*common_c != c) {
      throw Error(Errc::DegreeIncompatible,
                  "sigma_{" + std::to_string(i) + "," + std::to_string(j) + "}: " +
                      std::to_string(*hd) + " - a_i - a_j = " + std::to_string(c) +
                      " differs from the common value " + std::to_string(*common_c));
    }
  }
  if (!common_c) throw Error(Errc::DegenerateForm, "all sigma entries are zero");
  md.common_c = *common_c;
  md.c1 = 0;
  md.delta = 0;
  md.diag.resize(m);
  for (uint32_t i = 0; i < m; ++i) {
    md.c1 += b.weights_[i];
    md.diag[i] = 2 * b.weights_[i] + md.common_c;
    md.delta += md.diag[i];
  }
  b.mdeg_ = md;

  // generic non-degeneracy
  if (poly_det(b.gram()).is_zero())
    throw Error(Errc::DegenerateForm, "Gram determinant vanishes identically");
  return b;
}

const MultiPoly& QuadricBundle::sigma(uint32_t i, uint32_t j) const {
  auto key = std::make_pair(std::min(i, j), std::max(i, j));
  auto it = sigma_.find(key);
  return it == sigma_.end() ? zero_ : it->second;
}

MultiPoly QuadricBundle::equation() const {
  const VarSpec vs = varspec();
  MultiPoly eq(vs, field_);
  const uint32_t m = fiber_dim_ + 2;
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = i; j < m; ++j) {
      const MultiPoly& s = sigma(i, j);
      if (s.is_zero()) continue;
      MultiPoly yi = MultiPoly::variable(vs, field_, vs.nx + i);
      MultiPoly yj = MultiPoly::variable(vs, field_, vs.nx + j);
      eq = eq + s * yi * yj;
    }
  return eq;
}

PolyMatrix QuadricBundle::gram() const {
  const uint32_t m = fiber_dim_ + 2;
  PolyMatrix g(m, m, varspec(), field_);
  FieldElem half = field_->inv(field_->from_int(2));
  for (uint32_t i = 0; i < m; ++i) {
    for (uint32_t j = i; j < m; ++j) {
      const MultiPoly& s = sigma(i, j);
      if (s.is_zero()) continue;
      if (i == j) {
        g.at(i, i) = s;
      } else {
        MultiPoly h = s.scale(half);
        g.at(i, j) = h;
        g.at(j, i) = h;
      }
    }
  }
  return g;
}

std::pair<MultiPoly, long long> discriminant(const QuadricBundle& b) {
  MultiPoly det = poly_det(b.gram());
  long long delta = b.multidegree().delta;
  // every permutation product in det is homogeneous of degree delta, so a
  // nonzero det has degree exactly delta
  if (det.is_zero() || det.total_degree() != delta)
    throw Error(Errc::DegenerateForm, "discriminant degree mismatch");
  return {det.make_monic(), delta};
}

AntiCanonicalData anticanonical(const QuadricBundle& b) {
  const auto& md = b.multidegree();
  long long n = b.n(), h = b.fiber_dim();
  AntiCanonicalData ac;
  ac.coeff_H1 = Rat(Int((n - h + 1) * (h + 2) - h * md.c1 - md.delta), Int(h + 2));
  ac.coeff_H2 = h;
  ac.class_Q_H1 = Rat(Int(md.delta - 2 * md.c1), Int(h + 2));
  ac.class_Q_H2 = 2;
  ac.volume = volume(b);
  return ac;
}

Rat volume(const QuadricBundle& b) {
  const auto& md = b.multidegree();
  const long long n = b.n(), h = b.fiber_dim();
  const long long base = b.base_dim();
  // Chern classes of E = sum O(a_j): elementary symmetric functions of the
  // weights, truncated to 0 in degrees above the base dimension.
  std::vector<Int> elem(b.weights().size() + 1, 0);
  elem[0] = 1;
  {
    size_t used = 0;
    for (int a : b.weights()) {
      ++used;
      for (size_t k = std::min(elem.size() - 1, used); k >= 1; --k)
        elem[k] += Int(a) * elem[k - 1];
    }
  }
  auto chern = [&](long long i) -> Int {
    if (i < 0 || i > base) return 0;
    return (size_t)i < elem.size() ? elem[i] : Int(0);
  };
  // g_i = c1 g_{i-1} - c2 g_{i-2} + ... + (-1)^{i-1} c_i g_0, g_0 = 1
  std::vector<Int> g(base + 1, 0);
  g[0] = 1;
  for (long long i = 1; i <= base; ++i) {
    Int acc = 0;
    int sign = 1;
    for (long long k = 1; k <= i; ++k) {
      acc += sign * chern(k) * g[i - k];
      sign = -sign;
    }
    g[i] = acc;
  }
  Rat A = Rat(Int(md.delta - 2 * md.c1), Int(h + 2));                         // Q ~ A H1 + 2 H2
  Rat B = Rat(Int((base + 1) * (h + 2) - h * md.c1 - md.delta), Int(h + 2));  // -K = B H1 + h H2
  Rat total = 0;
  for (long long i = 0; i <= base; ++i) {
    Rat gi_1 = (i == 0) ? Rat(0) : Rat(g[i - 1]);
    Rat term = Rat(binom(n, base - i)) * (A * gi_1 + 2 * Rat(g[i]));
    for (long long k = 0; k < base - i; ++k) term *= B;
    Int hp = 1;
    for (long long k = 0; k < h + i; ++k) hp *= h;
    term *= Rat(hp);
    total += term;
  }
  return total;
}

QuadricBundle slice(const QuadricBundle& b, uint32_t j) {
  if (j + 2 > b.fiber_dim())
    throw Error(Errc::SliceTooDeep, "slice must keep fiber dimension >= 1 (j <= h-2)");
  const uint32_t m = b.fiber_dim() + 2;
  const uint32_t keep_from = j + 1;
  std::vector<int> w(b.weights().begin() + keep_from, b.weights().end());
  const VarSpec vs_old = b.varspec();
  const uint32_t new_h = b.fiber_dim() - (j + 1);
  const VarSpec vs_new{vs_old.nx, new_h + 2};
  std::vector<MultiPoly> images(vs_old.total(), MultiPoly::zero(vs_new, b.field()));
  for (uint32_t v = 0; v < vs_old.nx; ++v)
    images[v] = MultiPoly::variable(vs_new, b.field(), v);
  for (uint32_t i = keep_from; i < m; ++i)
    images[vs_old.nx + i] = MultiPoly::variable(vs_new, b.field(), vs_new.nx + (i - keep_from));
  std::map<std::pair<uint32_t, uint32_t>, MultiPoly> sig;
  for (uint32_t i = keep_from; i < m; ++i)
    for (uint32_t k = i; k < m; ++k) {
      const MultiPoly& s = b.sigma(i, k);
      if (s.is_zero()) continue;
      sig.emplace(std::make_pair(i - keep_from, k - keep_from), s.map_variables(vs_new, images));
    }
  return QuadricBundle::validate(b.base_dim(), new_h, std::move(w), std::move(sig), b.field());
}

QuadricBundle restrict_to_line(const QuadricBundle& b, const Line& line) {
  if (b.base_dim() < 2)
    throw Error(Errc::BadInput, "line restriction needs base dimension >= 2");
  const VarSpec vs_old = b.varspec();
  if (line.alpha.size() != vs_old.nx || line.beta.size() != vs_old.nx)
    throw Error(Errc::BadInput, "line parametrization has wrong arity");
  const VarSpec vs_new{2, vs_old.ny};
  auto F = b.field();
  std::vector<MultiPoly> images(vs_old.total(), MultiPoly::zero(vs_new, F));
  for (uint32_t v = 0; v < vs_old.nx; ++v) {
    MultiPoly s = MultiPoly::variable(vs_new, F, 0).scale(F->from_rat(line.alpha[v]));
    MultiPoly t = MultiPoly::variable(vs_new, F, 1).scale(F->from_rat(line.beta[v]));
    images[v] = s + t;
  }
  for (uint32_t i = 0; i < vs_old.ny; ++i)
    images[vs_old.nx + i] = MultiPoly::variable(vs_new, F, 2 + i);
  std::map<std::pair<uint32_t, uint32_t>, MultiPoly> sig;
  const uint32_t m = b.fiber_dim() + 2;
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t k = i; k < m; ++k) {
      const MultiPoly& s = b.sigma(i, k);
      if (s.is_zero()) continue;
      MultiPoly r = s.map_variables(vs_new, images);
      if (!r.is_zero()) sig.emplace(std::make_pair(i, k), std::move(r));
    }
  QuadricBundle restricted;
  try {
    restricted = QuadricBundle::validate(1, b.fiber_dim(), b.weights(), std::move(sig), F);
  } catch (const Error& e) {
    if (e.code() == Errc::DegenerateForm || e.code() == Errc::DegreeIncompatible ||
        e.code() == Errc::NotHomogeneous)
      throw Error(Errc::DegenerateLine, "restriction degenerates on this line");
    throw;
  }
  if (restricted.multidegree().delta != b.multidegree().delta)
    throw Error(Errc::DegenerateLine, "discriminant degree drops on this line");
  return restricted;
}

std::optional<SectionWitness> zero_diagonal_section(const QuadricBundle& b) {
  const uint32_t m = b.fiber_dim() + 2;
  for (uint32_t i = 0; i < m; ++i) {
    if (b.sigma(i, i).is_zero()) {
      SectionWitness w;
      w.index = i;
      w.locus = "{y_j = 0 for j != " + std::to_string(i) + "}";
      return w;
    }
  }
  return std::nullopt;
}

SplitFormFlags split_form_checks(const QuadricBundle& b) {
  if (b.base_dim() != 1)
    throw Error(Errc::BadInput, "split-form checks apply to bundles over P^1");
  SplitFormFlags flags;
  const uint32_t m = b.fiber_dim() + 2;

  std::vector<MultiPoly> entries;
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = i; j < m; ++j)
      if (!b.sigma(i, j).is_zero()) entries.push_back(b.sigma(i, j));
  MultiPoly g = poly_gcd_xonly(entries);
  flags.has_x_factor = g.total_degree() > 0;

  // rank <= 2 over k(x0,x1) <=> every 3x3 minor of the Gram matrix vanishes
  PolyMatrix gram = b.gram();
  flags.rank_le_2_over_function_field = true;
  for (uint32_t a = 0; a < m && flags.rank_le_2_over_function_field; ++a)
    for (uint32_t bb = a + 1; bb < m && flags.rank_le_2_over_function_field; ++bb)
      for (uint32_t c = bb + 1; c < m && flags.rank_le_2_over_function_field; ++c)
        for (uint32_t d = 0; d < m && flags.rank_le_2_over_function_field; ++d)
          for (uint32_t e = d + 1; e < m && flags.rank_le_2_over_function_field; ++e)
            for (uint32_t f = e + 1; f < m && flags.rank_le_2_over_function_field; ++f) {
              std::vector<size_t> rows = {a, bb, c};
              std::vector<size_t> cols = {d, e, f};
              if (!poly_det(gram.submatrix(rows, cols)).is_zero())
                flags.rank_le_2_over_function_field = false;
            }

  // rho: determinant of the conic-slice Gram (last three fiber coordinates)
  const QuadricBundle* conic = &b;
  QuadricBundle sliced;
  if (b.fiber_dim() > 1) {
    try {
      sliced = slice(b, b.fiber_dim() - 2);
      conic = &sliced;
    } catch (const Error&) {
      // slice validation failed: the conic slice is degenerate, rho == 0
      flags.rho_nonzero = false;
      return flags;
    }
  }
  flags.rho_nonzero = !poly_det(conic->gram()).is_zero();
  return flags;
}

}  // namespace qb
