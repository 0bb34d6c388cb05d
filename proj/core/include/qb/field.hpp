#pragma once

#include "qb/error.hpp"
#include "qb/rational.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qb {

enum class FieldKind { Rationals, Prime, Extension };

// Describes Q, F_p, or F_{p^a} with an explicit monic modulus over F_p.
// The modulus is stored little-endian (index = degree) with leading
// coefficient 1; an empty modulus means "auto-select the first irreducible
// in lexicographic coefficient order".
struct FieldSpec {
  FieldKind kind = FieldKind::Rationals;
  uint32_t p = 0;
  uint32_t a = 1;
  std::vector<uint32_t> modulus;

  static FieldSpec rationals() { return {}; }
  static FieldSpec prime(uint32_t p);
  static FieldSpec extension(uint32_t p, uint32_t a, std::vector<uint32_t> modulus = {});

  // Textual forms: "Q", "F:p", "F:p^a", "F:p^a:[c0,c1,...,1]".
  static FieldSpec parse(const std::string& text);
  std::string str() const;
};

// Field element. Finite-field elements are stored as a code in [0, q):
// for F_p the residue itself, for F_{p^a} the integer sum c_i p^i of the
// coefficient vector (c_0 = constant term). Rational elements are exact.
class FieldElem {
 public:
  FieldElem() = default;
  static FieldElem finite(uint64_t code) {
    FieldElem e;
    e.code_ = code;
    return e;
  }
  static FieldElem rational(Rat r) {
    FieldElem e;
    e.rat_ = std::move(r);
    e.is_rat_ = true;
    return e;
  }

  uint64_t code() const { return code_; }
  const Rat& rat() const { return rat_; }
  bool is_rational_repr() const { return is_rat_; }

  bool operator==(const FieldElem& o) const {
    return is_rat_ == o.is_rat_ && (is_rat_ ? rat_ == o.rat_ : code_ == o.code_);
  }
  bool operator!=(const FieldElem& o) const { return !(*this == o); }

 private:
  uint64_t code_ = 0;
  Rat rat_;
  bool is_rat_ = false;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Immutable field handle; safe to share across threads.
class Field : public std::enable_shared_from_this<Field> {
 public:
  // Validates the spec: CharTwo for p = 2, NotPrime, ReducibleModulus.
  static FieldPtr make(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  FieldKind kind() const { return spec_.kind; }
  bool finite() const { return spec_.kind != FieldKind::Rationals; }
  uint32_t p() const { return spec_.p; }
  uint32_t deg() const { return spec_.a; }
  uint64_t q() const { return q_; }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_int(long long v) const;
  FieldElem from_rat(const Rat& r) const;  // finite: reduces num/den mod p

  FieldElem add(const FieldElem& x, const FieldElem& y) const;
  FieldElem sub(const FieldElem& x, const FieldElem& y) const;
  FieldElem mul(const FieldElem& x, const FieldElem& y) const;
  FieldElem neg(const FieldElem& x) const;
  FieldElem inv(const FieldElem& x) const;  // throws on zero
  FieldElem div(const FieldElem& x, const FieldElem& y) const;
  FieldElem pow(FieldElem base, uint64_t e) const;
  bool is_zero(const FieldElem& x) const;
  bool is_one(const FieldElem& x) const;
  bool eq(const FieldElem& x, const FieldElem& y) const { return x == y; }

  // Deterministic enumeration of all q elements: codes 0,1,...,q-1, i.e.
  // 0, 1, ..., p-1 for prime fields and lexicographic coefficient order
  // (highest coefficient most significant) for extensions.
  // Throws InfiniteField over the rationals.
  std::vector<FieldElem> enumerate() const;

  // Fast finite-field arithmetic on raw codes (valid only for finite kinds).
  uint32_t fadd(uint32_t x, uint32_t y) const;
  uint32_t fsub(uint32_t x, uint32_t y) const;
  uint32_t fmul(uint32_t x, uint32_t y) const;
  uint32_t fneg(uint32_t x) const;
  uint32_t finv(uint32_t x) const;
  uint32_t fpow(uint32_t x, uint64_t e) const;

  // Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
  // Over Q: is_square decides exactly; quad_character throws.
  int quad_character(const FieldElem& x) const;
  bool is_square(const FieldElem& x) const;

  std::string print(const FieldElem& x) const;
  FieldElem parse_elem(const std::string& text) const;

  // Embeds this field's elements into `ext`, an extension field with the
  // same characteristic and deg(this) | deg(ext). Returns the image codes
  // of this field's generator-power basis applied to `code`.
  // Deterministic: the generator maps to the first root of this field's
  // modulus in enumeration order.
  std::vector<uint32_t> embedding_into(const Field& ext) const;

 private:
  explicit Field(FieldSpec spec) : spec_(std::move(spec)) {}
  void init();
  uint32_t ext_mul_slow(uint32_t x, uint32_t y) const;

  FieldSpec spec_;
  uint64_t q_ = 0;
  // lookup tables for extension fields (built when q <= kTableCap)
  static constexpr uint64_t kTableCap = 4096;
  std::vector<uint16_t> mul_table_;
  std::vector<uint16_t> add_table_;
  std::vector<uint32_t> inv_table_;
};

// Primality by trial division (desk scale).
bool is_prime_u32(uint32_t n);

}  // namespace qb
