#pragma once

#include "qb/bundle.hpp"
#include "qb/enumerate.hpp"
#include "qb/transform.hpp"

#include <chrono>

namespace qb {

enum class CountMethod { BruteForce, FiberwiseFormula, Hybrid };

struct CountReport {
  uint64_t count = 0;
  CountMethod method = CountMethod::BruteForce;
  std::chrono::milliseconds elapsed{0};
  FieldSpec field;
};

const char* count_method_name(CountMethod m);

// A polynomial system on a product of projective blocks (len = dim+1 each).
// Weights, when present, describe the toric ambient of a bundle over the
// first block: scaling the base representative rescales fiber coordinates,
// which permutes the fiber's projective points, so counting fiberwise over
// arbitrary representatives is well-defined.
struct ProductSystem {
  std::vector<uint32_t> block_lens;  // e.g. {2, n+1}
  std::vector<MultiPoly> polys;      // varspec (block_lens[0], block_lens[1])
  FieldPtr field;

  static ProductSystem from_bundle(const QuadricBundle& b);
  static ProductSystem from_divisor(const BidegreeDivisor& d);
  static ProductSystem from_quadrics(const QuadricSystem& s);
};

// Exact number of F_q points by exhaustive enumeration of normalized
// representatives. Deterministic; parallel over first-block chunks.
CountReport count_points_fq(const ProductSystem& sys, unsigned threads = 0);

// Closed-form count of projective zeros of one quadratic form of rank r in
// m variables over F_q (eta = quadratic character of the nondegenerate
// part's signed determinant; ignored for odd/zero rank).
uint64_t quadric_point_count(uint64_t q, uint32_t m, uint32_t r, int eta);

// Rank and character data of a constant-coefficient Gram matrix over F_q.
struct QuadraticFormClass {
  uint32_t rank = 0;
  int eta = 0;  // quad. character of (-1)^(rank/2) * det(nondeg part); 0 if rank odd
};
QuadraticFormClass classify_quadric(const Field& F,
                                    const std::vector<std::vector<uint32_t>>& gram);

// Per-base-fiber counting for a quadric bundle over P^1 using the closed
// form. The formula path is gated by validate_quadric_formula() (run by the
// test suite) and Hybrid mode re-checks it against brute force per call.
CountReport count_fiberwise_fast(const QuadricBundle& b, CountMethod method = CountMethod::FiberwiseFormula,
                                 unsigned threads = 0);

// The gate: compares quadric_point_count against a brute-force oracle on
// every quadratic form in <= 4 variables over the given prime field.
// Returns the number of forms checked; throws on any disagreement.
uint64_t validate_quadric_formula(uint32_t p, unsigned threads = 0);

// ---------- rational points of bounded height ----------

struct HeightWindow {
  long long bound = 1;
  // chart constraints: (block index, coordinate index) pairs that must not
  // vanish
  std::vector<std::pair<uint32_t, uint32_t>> nonzero;
  HeightConvention convention = HeightConvention::MaxOfFactors;
};

// Deterministic stream of product points over Q: increasing height, then
// lexicographic on concatenated coordinate tuples under 0 < 1 < -1 < 2 < ...
// fn returns false to stop. Returns false iff stopped early.
bool height_stream(const std::vector<uint32_t>& block_lens, const HeightWindow& window,
                   const std::function<bool(const ProductPoint&, long long)>& fn,
                   const FieldPtr& field);

// Exact N(U, B): points of the system's zero locus satisfying the chart
// constraints with height <= bound. Two-block systems only (the paper's
// shapes); parallel over fiber-block chunks; deterministic.
CountReport count_rational_height(const ProductSystem& sys, const HeightWindow& window,
                                  unsigned threads = 0);

}  // namespace qb
