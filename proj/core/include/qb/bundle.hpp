#pragma once

#include "qb/poly.hpp"

#include <optional>

namespace qb {

// Degrees d_{i,j} of the coefficient table. Diagonal degrees are the
// "virtual" values 2 a_i + c (so forced-zero entries report their negative
// degree); absent off-diagonal entries carry no degree.
struct Multidegree {
  std::vector<std::vector<std::optional<int>>> d;  // (h+2)x(h+2), upper used
  std::vector<int> diag;                           // virtual d_{i,i} = 2 a_i + c
  int common_c = 0;                                // d_{i,j} - a_i - a_j
  long long delta = 0;                             // sum of virtual diagonal degrees
  long long c1 = 0;                                // sum of weights
};

struct AntiCanonicalData {
  Rat coeff_H1;      // ((n-h+1)(h+2) - h c1 - delta) / (h+2)
  long long coeff_H2;  // h
  Rat class_Q_H1;    // (delta - 2 c1) / (h+2)
  long long class_Q_H2 = 2;
  Rat volume;        // (-K)^n
};

struct SplitFormFlags {
  bool has_x_factor = false;            // common x-only factor of all sigma_{i,j}
  bool rank_le_2_over_function_field = false;  // all 3x3 minors of the Gram vanish
  bool rho_nonzero = false;             // det of the 3x3 conic-slice Gram != 0
};

struct SectionWitness {
  uint32_t index;       // i with sigma_{i,i} = 0
  std::string locus;    // "{y_j = 0 for j != i}"
};

// Splitting quadric bundle over P^{n-h}: weights a_0 >= ... >= a_{h+1} and a
// symmetric table of x-only homogeneous coefficients sigma_{i,j} (i <= j).
class QuadricBundle {
 public:
  // Default-constructed bundles are empty placeholders; real bundles come
  // from validate().
  QuadricBundle() = default;

  // Validates all structural invariants:
  //  - WeightsUnsorted, DegreeIncompatible(i,j), NotHomogeneous(i,j),
  //  - DegenerateForm when det(Gram) == 0.
  static QuadricBundle validate(uint32_t base_dim, uint32_t fiber_dim,
                                std::vector<int> weights,
                                std::map<std::pair<uint32_t, uint32_t>, MultiPoly> sigma,
                                FieldPtr field);

  uint32_t base_dim() const { return base_dim_; }   // n - h
  uint32_t fiber_dim() const { return fiber_dim_; } // h
  uint32_t n() const { return base_dim_ + fiber_dim_; }
  const std::vector<int>& weights() const { return weights_; }
  const FieldPtr& field() const { return field_; }
  VarSpec varspec() const { return {base_dim_ + 1, fiber_dim_ + 2}; }
  const Multidegree& multidegree() const { return mdeg_; }

  // sigma_{i,j} for i <= j (zero polynomial if absent).
  const MultiPoly& sigma(uint32_t i, uint32_t j) const;

  // The defining equation sum_{i<=j} sigma_{i,j} y_i y_j.
  MultiPoly equation() const;

  // Symmetric Gram matrix: diagonal sigma_{i,i}, off-diagonal sigma_{i,j}/2.
  PolyMatrix gram() const;

 private:
  uint32_t base_dim_ = 0, fiber_dim_ = 0;
  std::vector<int> weights_;
  std::map<std::pair<uint32_t, uint32_t>, MultiPoly> sigma_;
  FieldPtr field_;
  Multidegree mdeg_;
  MultiPoly zero_;
};

// Determinant of the Gram matrix, normalized monic in graded-lex, plus the
// discriminant degree delta (from the multidegree; asserted equal to the
// determinant's degree, which holds by homogeneity).
std::pair<MultiPoly, long long> discriminant(const QuadricBundle& b);

// Anti-canonical class coefficients and exact (-K)^n.
AntiCanonicalData anticanonical(const QuadricBundle& b);

// Exact (-K)^n via the Chern-class recursion g_i = c1 g_{i-1} - c2 g_{i-2} + ...
Rat volume(const QuadricBundle& b);

// Q_j = Q cap {y_0 = ... = y_j = 0}: drops rows/columns 0..j and the first
// j+1 weights. Requires j <= fiber_dim - 2 so the result is still a bundle.
QuadricBundle slice(const QuadricBundle& b, uint32_t j);

// Line in the base, given by two spanning points: x_i = alpha_i s + beta_i t.
struct Line {
  std::vector<Rat> alpha, beta;  // used verbatim over Q; reduced mod p otherwise
};

// Restriction to the line; throws DegenerateLine if the discriminant degree
// drops (the line is not general).
QuadricBundle restrict_to_line(const QuadricBundle& b, const Line& line);

// Remark-style rational section from a vanishing diagonal entry.
std::optional<SectionWitness> zero_diagonal_section(const QuadricBundle& b);

// Hypothesis flags used by the unirationality engine (bundle over P^1).
SplitFormFlags split_form_checks(const QuadricBundle& b);

}  // namespace qb
