#pragma once

#include "qb/count.hpp"
#include "qb/transform.hpp"

#include <optional>

namespace qb {

enum class Verdict { Rational, Unirational, UnirationalOverQuadExt, Unknown };
const char* verdict_name(Verdict v);

enum class CheckStatus { Pass, Fail, NotApplicable, Assumed };
const char* check_status_name(CheckStatus s);

struct ChecklistEntry {
  std::string hypothesis;  // paper anchor, verbatim (e.g. "Thm main1(ii)")
  CheckStatus status;
  std::string evidence;
};

// One constructed object of a certificate's witness chain. The `kind` tag
// determines which payload fields are meaningful.
struct WitnessObject {
  std::string kind;  // section | slice | divisor-shape | point | zbar |
                     // quadric-system | point-on-X | cubic | cubic-point |
                     // strict-transform | extension-disc | line | flags
  std::string note;
  std::optional<ProductPoint> point;
  std::vector<MultiPoly> polys;
  std::vector<FieldElem> scalars;
  std::optional<uint32_t> index;
  std::vector<std::vector<FieldElem>> matrix;
};

struct Certificate {
  Verdict verdict = Verdict::Unknown;
  std::string theorem_path;
  std::vector<ChecklistEntry> checklist;
  std::vector<WitnessObject> witness_chain;
  std::optional<FieldElem> extension_disc;  // UnirationalOverQuadExt
  std::string unknown_reason;               // first failed mandatory hypothesis
};

struct SearchBudget {
  long long height_bound = 3;   // rationals: max height searched
  uint64_t time_cap_ms = 0;     // 0 = no cap; caps make verdicts machine-bound
  bool finite_full_scan = true; // finite fields: exhaustive enumeration
};

// Declared properties of the base field that the tool records but cannot
// verify (Cor corEn(ii), Prop gen333).
struct FieldAssumptions {
  std::optional<uint32_t> c_r;
};

enum class SearchStatus { Found, BudgetExceeded, CertifiedEmpty };

struct PointSearchResult {
  SearchStatus status = SearchStatus::BudgetExceeded;
  std::optional<ProductPoint> point;
  uint64_t tested = 0;
};

// First point of the system's zero locus in the deterministic enumeration
// order (finite fields: exhaustive representative scan, so a miss is
// CertifiedEmpty; rationals: height stream up to the budget). When the
// Chevalley-Warning bound guarantees a point on a one-block system over a
// finite field, an empty scan is escalated to an internal error.
PointSearchResult find_point(const ProductSystem& sys, const SearchBudget& budget);

// Like find_point, but requires Jacobian rank = number of equations at the
// point (for hypersurfaces: a nonvanishing gradient).
PointSearchResult smooth_point_search(const ProductSystem& sys, const SearchBudget& budget);

// The discriminant of the binary tail form f(y_{h}, y_{h+1}) obtained from
// sigma at x = [0:1], y_0 = ... = y_{h-1} = 0 (Cor potD's construction).
// Throws DegenerateTail when the form vanishes or has a double root.
struct QuadExtResult {
  FieldElem disc;          // b^2 - 4ac
  bool splits_over_base;   // disc is a square in k
  MultiPoly tail_form;     // the binary quadratic in the last two fiber vars
};
QuadExtResult quadratic_extension(const QuadricBundle& b);

// Delta_f = f1^2 - 4 f0 f2 sampling evidence for bidegree-(2,2) divisors in
// P^1 x P^n over Q (Prop op_ball's sign test). Never a proof of emptiness.
struct DeltaSamplingResult {
  bool found_nonneg = false;
  std::optional<ProductPoint> witness;  // y with Delta_f(y) >= 0
  uint64_t samples = 0;
  MultiPoly delta_f;
};
DeltaSamplingResult real_delta_sampling(const BidegreeDivisor& div, const SearchBudget& budget);

// The theorem decision engine.
Certificate certify(const QuadricBundle& b, const SearchBudget& budget,
                    const FieldAssumptions& assumptions = {});

}  // namespace qb
