#pragma once

#include "qb/field.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qb {

// Two named variable blocks: x0..x_{nx-1} (base) and y0..y_{ny-1} (fiber).
struct VarSpec {
  uint32_t nx = 0;
  uint32_t ny = 0;

  uint32_t total() const { return nx + ny; }
  bool operator==(const VarSpec& o) const { return nx == o.nx && ny == o.ny; }
  bool operator!=(const VarSpec& o) const { return !(*this == o); }

  // Variable index <-> name ("x3", "y1"). Throws UnknownVariable.
  std::string var_name(uint32_t idx) const;
  uint32_t var_index(const std::string& name) const;
};

using Exp = std::vector<uint16_t>;

inline uint32_t exp_total(const Exp& e) {
  uint32_t d = 0;
  for (auto v : e) d += v;
  return d;
}

// Graded lexicographic: total degree first, then lex in declared variable
// order (x-block before y-block). Used as the canonical term order.
struct GrLexLess {
  bool operator()(const Exp& a, const Exp& b) const {
    uint32_t da = exp_total(a), db = exp_total(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Sparse multivariate polynomial with exact coefficients. Immutable in
// practice: all operations return new values.
class MultiPoly {
 public:
  using TermMap = std::map<Exp, FieldElem, GrLexLess>;

  MultiPoly() = default;
  MultiPoly(VarSpec vs, FieldPtr field) : vs_(vs), field_(std::move(field)) {}

  static MultiPoly zero(VarSpec vs, FieldPtr field) { return MultiPoly(vs, std::move(field)); }
  static MultiPoly constant(VarSpec vs, FieldPtr field, const FieldElem& c);
  static MultiPoly variable(VarSpec vs, FieldPtr field, uint32_t var, uint16_t e = 1);
  static MultiPoly monomial(VarSpec vs, FieldPtr field, Exp e, const FieldElem& c);

  const VarSpec& varspec() const { return vs_; }
  const FieldPtr& field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator-() const;
  bool operator==(const MultiPoly& o) const;
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  MultiPoly scale(const FieldElem& c) const;
  MultiPoly pow(uint32_t e) const;

  // Degrees (-1 for the zero polynomial).
  int total_degree() const;
  int x_degree() const;
  int y_degree() const;
  bool is_x_only() const;  // every term has zero y-exponents
  bool is_y_only() const;

  // Exact degree if homogeneous in the given block (counting only that
  // block's exponents), nullopt otherwise. Zero polynomial: degree 0.
  std::optional<int> homogeneous_degree_x() const;
  std::optional<int> homogeneous_degree_y() const;
  std::optional<int> homogeneous_degree_total() const;

  // Leading term in graded-lex order.
  const std::pair<const Exp, FieldElem>& leading_term() const;
  MultiPoly make_monic() const;  // divide by leading coefficient

  // Full evaluation: point has one value per variable.
  FieldElem eval(const std::vector<FieldElem>& point) const;

  // Simultaneous substitution of selected variables by constants or
  // polynomials sharing this varspec. Unassigned variables stay.
  using Subst = std::map<uint32_t, std::variant<FieldElem, MultiPoly>>;
  MultiPoly substitute(const Subst& assignment) const;

  // Ring map into a different varspec: images[v] is the image of variable v
  // (all images over target_vs and the same field).
  MultiPoly map_variables(VarSpec target_vs, const std::vector<MultiPoly>& images) const;

  MultiPoly derivative(uint32_t var) const;

  // Exact division; throws NotSupported if the division is not exact.
  MultiPoly divide_exact(const MultiPoly& divisor) const;

  std::string str() const;  // canonical graded-lex descending form

  void add_term(const Exp& e, const FieldElem& c);  // builder helper

 private:
  void check_compat(const MultiPoly& o) const;

  VarSpec vs_;
  FieldPtr field_;
  TermMap terms_;
};

// Parses the polynomial grammar over the given variables/field:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := primary ['^' exponent]
//   primary:= number | variable | '(' expr ')'
//   number := digits ['/' digits]
//   exponent := digits | '(' ['-'] digits ')'
// Errors: SyntaxError (with position), UnknownVariable, NegativeExponent.
MultiPoly parse_poly(const std::string& text, VarSpec vs, const FieldPtr& field);

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(size_t rows, size_t cols, VarSpec vs, FieldPtr field);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const VarSpec& varspec() const { return vs_; }
  const FieldPtr& field() const { return field_; }

  MultiPoly& at(size_t r, size_t c) { return entries_[r * cols_ + c]; }
  const MultiPoly& at(size_t r, size_t c) const { return entries_[r * cols_ + c]; }

  PolyMatrix submatrix(const std::vector<size_t>& rs, const std::vector<size_t>& cs) const;

 private:
  size_t rows_ = 0, cols_ = 0;
  VarSpec vs_;
  FieldPtr field_;
  std::vector<MultiPoly> entries_;
};

// Exact determinant: memoized cofactor expansion for sizes <= 8,
// fraction-free Bareiss elimination above. Throws NonSquare.
MultiPoly poly_det(const PolyMatrix& m);

// Monic gcd of x-only polynomials. Fully general for nx = 2 (via
// dehomogenization and Euclid); for nx > 2 only monomial gcds are
// supported (all-monomial inputs), otherwise NotSupported.
// Returns 1 for coprime inputs; gcd of an empty list or all-zero list is 0.
MultiPoly poly_gcd_xonly(const std::vector<MultiPoly>& ps);

// Matrix of all partials d p_i / d v, variables in declared order.
PolyMatrix jacobian(const std::vector<MultiPoly>& ps);

}  // namespace qb
