#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qb/field.hpp"

#include <random>
#include <set>

using namespace qb;

TEST_CASE("prime field construction and cardinality") {
  auto f5 = Field::make(FieldSpec::prime(5));
  CHECK(f5->q() == 5);
  CHECK(f5->finite());

  auto f9 = Field::make(FieldSpec::extension(3, 2, {1, 0, 1}));  // t^2+1
  CHECK(f9->q() == 9);

  CHECK_THROWS_AS(Field::make(FieldSpec::prime(2)), Error);
  try {
    Field::make(FieldSpec::prime(2));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CharTwo);
  }
  CHECK_THROWS_AS(Field::make(FieldSpec::prime(15)), Error);
  // t^2 - 1 = (t-1)(t+1) reducible over F_3
  CHECK_THROWS_AS(Field::make(FieldSpec::extension(3, 2, {2, 0, 1})), Error);
}

TEST_CASE("auto modulus selection is the first irreducible in lex order") {
  auto f9 = Field::make(FieldSpec::parse("F:3^2"));
  CHECK(f9->spec().modulus == std::vector<uint32_t>{1, 0, 1});  // t^2+1
  auto f27 = Field::make(FieldSpec::parse("F:3^3"));
  // earlier codes all have roots: t^3, t^3+1 (t=2), t^3+2 (t=1), t^3+t (t=0),
  // t^3+t+1 (t=1), t^3+t+2 (t=2), t^3+2t (t=0); first irreducible is t^3+2t+1
  CHECK(f27->spec().modulus == std::vector<uint32_t>{1, 2, 0, 1});
  for (int t = 0; t < 3; ++t) {
    int v = (t * t * t + 2 * t + 1) % 3;
    CHECK(v != 0);
  }
}

TEST_CASE("enumeration: order, length, no duplicates") {
  auto f3 = Field::make(FieldSpec::prime(3));
  auto e3 = f3->enumerate();
  REQUIRE(e3.size() == 3);
  CHECK(f3->print(e3[0]) == "0");
  CHECK(f3->print(e3[1]) == "1");
  CHECK(f3->print(e3[2]) == "2");

  auto f9 = Field::make(FieldSpec::parse("F:3^2"));
  auto e9 = f9->enumerate();
  REQUIRE(e9.size() == 9);
  CHECK(f9->is_zero(e9[0]));
  CHECK(f9->is_one(e9[1]));
  std::set<uint64_t> codes;
  for (auto& e : e9) codes.insert(e.code());
  CHECK(codes.size() == 9);

  auto q = Field::make(FieldSpec::rationals());
  CHECK_THROWS_AS(q->enumerate(), Error);
}

TEST_CASE("field axioms exhaustively for q <= 49") {
  for (auto spec : {FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::prime(7),
                    FieldSpec::parse("F:3^2"), FieldSpec::parse("F:5^2"), FieldSpec::parse("F:7^2"),
                    FieldSpec::parse("F:3^3")}) {
    auto F = Field::make(spec);
    auto elems = F->enumerate();
    for (const auto& x : elems) {
      if (F->is_zero(x)) continue;
      CHECK(F->is_one(F->mul(x, F->inv(x))));
      CHECK(F->is_one(F->pow(x, F->q() - 1)));
    }
    // a couple of ring identities on all pairs
    for (const auto& x : elems)
      for (const auto& y : elems) {
        CHECK(F->add(x, y) == F->add(y, x));
        CHECK(F->mul(x, y) == F->mul(y, x));
        CHECK(F->sub(F->add(x, y), y) == x);
      }
  }
}

TEST_CASE("rational arithmetic is exact on big values") {
  auto Q = Field::make(FieldSpec::rationals());
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    long long a = (long long)(rng() % 2000000000ull) - 1000000000;
    long long b = (long long)(rng() % 2000000000ull) + 1;
    long long c = (long long)(rng() % 2000000000ull) - 1000000000;
    long long d = (long long)(rng() % 2000000000ull) + 1;
    Rat x(a, b), y(c, d);
    FieldElem s = Q->add(FieldElem::rational(x), FieldElem::rational(y));
    // (a/b + c/d) * b * d == a*d + c*b as exact integers
    Rat lhs = s.rat() * Rat(b) * Rat(d);
    Rat rhs = Rat(Int(a) * Int(d) + Int(c) * Int(b));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("quadratic character") {
  auto f7 = Field::make(FieldSpec::prime(7));
  // squares mod 7: 1,2,4
  CHECK(f7->quad_character(f7->from_int(1)) == 1);
  CHECK(f7->quad_character(f7->from_int(2)) == 1);
  CHECK(f7->quad_character(f7->from_int(4)) == 1);
  CHECK(f7->quad_character(f7->from_int(3)) == -1);
  CHECK(f7->quad_character(f7->from_int(5)) == -1);
  CHECK(f7->quad_character(f7->from_int(6)) == -1);
  CHECK(f7->quad_character(f7->zero()) == 0);

  auto Q = Field::make(FieldSpec::rationals());
  CHECK(Q->is_square(FieldElem::rational(Rat(4, 9))));
  CHECK(!Q->is_square(FieldElem::rational(Rat(-4))));
  CHECK(!Q->is_square(FieldElem::rational(Rat(2))));
}

TEST_CASE("spec parsing round trip") {
  auto s = FieldSpec::parse("F:5^2:[2,0,1]");
  CHECK(s.p == 5);
  CHECK(s.a == 2);
  CHECK(s.modulus == std::vector<uint32_t>{2, 0, 1});
  CHECK(FieldSpec::parse("Q").kind == FieldKind::Rationals);
  CHECK(FieldSpec::parse("F:11").p == 11);
  CHECK_THROWS_AS(FieldSpec::parse("garbage"), Error);
}

TEST_CASE("embedding F_9 into F_81") {
  auto f9 = Field::make(FieldSpec::parse("F:3^2"));
  auto f81 = Field::make(FieldSpec::parse("F:3^4"));
  auto basis = f9->embedding_into(*f81);
  REQUIRE(basis.size() == 2);
  // the embedding is a ring homomorphism: check multiplicativity on codes
  auto embed = [&](uint32_t code) {
    uint32_t c0 = code % 3, c1 = code / 3;
    uint32_t r = 0;
    r = f81->fadd(f81->fmul(c0, basis[0]), f81->fmul(c1, basis[1]));
    return r;
  };
  for (uint32_t x = 0; x < 9; ++x)
    for (uint32_t y = 0; y < 9; ++y) {
      CHECK(embed(f9->fmul(x, y)) == f81->fmul(embed(x), embed(y)));
      CHECK(embed(f9->fadd(x, y)) == f81->fadd(embed(x), embed(y)));
    }
}
