#pragma once

#include "qb/bundle.hpp"
#include "qb/point.hpp"

#include <optional>

namespace qb {

// Divisor of bidegree (d,2) in P^1 x P^n, written sum_i x0^{d-i} x1^i f_i
// with f_i quadratic forms in y_0..y_n.
class BidegreeDivisor {
 public:
  static BidegreeDivisor make(uint32_t d, uint32_t n, std::vector<MultiPoly> f, FieldPtr field);

  // Shape detection: a bundle is a (d,2) divisor iff all weights are equal.
  static std::optional<BidegreeDivisor> from_bundle(const QuadricBundle& b);

  uint32_t d() const { return d_; }
  uint32_t n() const { return n_; }
  const FieldPtr& field() const { return field_; }
  VarSpec varspec() const { return {2, n_ + 1}; }
  const MultiPoly& f(uint32_t i) const { return f_[i]; }
  const std::vector<MultiPoly>& fs() const { return f_; }

  MultiPoly equation() const;

 private:
  uint32_t d_ = 0, n_ = 0;
  std::vector<MultiPoly> f_;
  FieldPtr field_;
};

// System of quadratic forms in P^n with constant coefficients, kept together
// with their symmetric Gram matrices.
class QuadricSystem {
 public:
  QuadricSystem() = default;
  static QuadricSystem make(uint32_t n, std::vector<MultiPoly> quadrics);

  uint32_t n() const { return n_; }
  const FieldPtr& field() const { return field_; }
  VarSpec varspec() const { return {0, n_ + 1}; }
  const std::vector<MultiPoly>& quadrics() const { return quadrics_; }
  const std::vector<std::vector<std::vector<FieldElem>>>& grams() const { return grams_; }

 private:
  uint32_t n_ = 0;
  std::vector<MultiPoly> quadrics_;
  std::vector<std::vector<std::vector<FieldElem>>> grams_;
  FieldPtr field_;
};

// The (d+1) x 3 matrix with rows (0, z0, f0), (-z0, z1, f1), ...,
// (-z_{d-1}, 0, f_d), over the ring whose x-block holds z_0..z_{d-1}.
// Requires d >= 2 (DegreeTooSmall).
PolyMatrix build_M(const BidegreeDivisor& div);

// Fiber X_{(zbar)} = {rank M_{(zbar)} < 3}: for zbar_0 != 0 the reduced
// system of d-1 row-(0,1,i) minors (i = 2..d); otherwise all nonzero 3x3
// minors. zbar must be nonzero (ZeroVector).
QuadricSystem fiber_X(const BidegreeDivisor& div, const std::vector<FieldElem>& zbar);

// psi(p) = ([t_0(p) : ... : t_{d-1}(p)], y(p)) with
// t_i = sum_{j<=i} x0^{i-j} x1^{d-1-i+j} f_j.
// Errors: NotOnVariety, IndeterminacyLocus (all t_i vanish).
ProductPoint psi_apply(const BidegreeDivisor& div, const ProductPoint& p);

// The strict transform of X_{(zbar)} on the chart {x1 != 0}: for the pivot m
// (first nonzero index of zbar, the paper's chart choice "zbar_0 != 0") the
// equations zbar_k t_m - zbar_m t_k = 0 (k = d-1..0, k != m, common x1 power
// stripped) followed by the divisor equation.
std::vector<MultiPoly> strict_transform(const BidegreeDivisor& div,
                                        const std::vector<FieldElem>& zbar);

struct ConeResult {
  bool is_cone = false;
  // basis of the common kernel of all Gram matrices (the vertex witness)
  std::vector<std::vector<FieldElem>> vertex_basis;
};

// A complete intersection of quadrics is a cone iff the Gram kernels share a
// nonzero vector.
ConeResult is_cone(const QuadricSystem& sys);

struct ProjectionResult {
  MultiPoly cubic;  // cubic form in n variables (w_0..w_{n-1}), varspec {0, n}
  // coordinate change: y = change * w, with w_n the eliminated coordinate
  std::vector<std::vector<FieldElem>> change;
  // the two decompositions Q_i(change * w) = w_n * L_i + A_i
  MultiPoly L1, A1, L2, A2;  // varspec {0, n}
};

// Projects a 2-quadric system from a smooth point p: moves p to the last
// coordinate point, eliminates it, and returns the cubic image plus the
// recorded chart. Errors: NotOnVariety, SingularCenter, WrongShape,
// DegenerateProjection (cubic identically zero).
ProjectionResult project_from_point(const QuadricSystem& sys, const ProductPoint& p);

enum class Smoothness { Smooth, Singular, HeuristicSmooth, HeuristicSingular };

struct SmoothnessReport {
  Smoothness verdict = Smoothness::Smooth;
  bool certified = false;  // exhaustive finite-field scan vs mod-p heuristic
  int check_level = 1;     // 2 = also scanned over F_{q^2}
  std::vector<std::string> detail;  // singular witness / primes used
};

// Exhaustive Jacobian-criterion scan over finite fields (check_level 2 also
// scans over F_{q^2}); over Q reduces modulo the first three good primes and
// reports a heuristic verdict, never a certificate.
SmoothnessReport smoothness_check(const QuadricSystem& sys, int check_level = 1,
                                  unsigned threads = 0);
SmoothnessReport smoothness_check(const BidegreeDivisor& div, int check_level = 1,
                                  unsigned threads = 0);

// Coefficient-wise field change (reduction mod p for rational inputs).
// Throws BadInput when a denominator is not invertible.
MultiPoly change_field(const MultiPoly& p, const FieldPtr& target);

}  // namespace qb
