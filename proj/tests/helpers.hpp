#pragma once

#include "qb/bundle.hpp"
#include "qb/enumerate.hpp"
#include "qb/transform.hpp"

#include <string>
#include <vector>

namespace qbtest {

using namespace qb;

inline FieldPtr rationals() {
  static FieldPtr f = Field::make(FieldSpec::rationals());
  return f;
}

// The three worked divisors of the corpus, by their defining quadrics.

// The 4-fold P^1 x P^4 example over Q with point ([0:1],[0:0:0:0:1]).
inline BidegreeDivisor dp_example(FieldPtr F = rationals()) {
  VarSpec vs{2, 5};
  auto p = [&](const std::string& s) { return parse_poly(s, vs, F); };
  std::vector<MultiPoly> f = {
      p("y0^2+y1^2+y2^2+y3^2+y4^2+y1*y3+y2*y4"),
      p("y4^2+y2^2+y3^2+y1*y2-y0*y3+y1*y4"),
      p("y2^2+y4^2+y1*y3+y0^2+y1^2-y0*y4"),
      p("y0^2+y1^2+y2^2+y3^2+y3*y4+y0*y4"),
  };
  return BidegreeDivisor::make(3, 4, std::move(f), F);
}

// The slice {y0 = 0} of the 5-fold running example: a (3,2) divisor in
// P^1 x P^4 with f0 = y0^2 (relabeled from y1..y5 to y0..y4).
inline BidegreeDivisor running_q3(FieldPtr F) {
  VarSpec vs{2, 5};
  auto p = [&](const std::string& s) { return parse_poly(s, vs, F); };
  std::vector<MultiPoly> f = {
      p("y0^2"),
      p("y1^2-y2^2"),
      p("y2^2-y3^2"),
      p("y4^2"),
  };
  return BidegreeDivisor::make(3, 4, std::move(f), F);
}

// The F_3 example: f0 = y4^2, f1 = y2^2, f2 = y3^2, f3 = y0^2 - y1^2.
inline BidegreeDivisor ff_example(FieldPtr F) {
  VarSpec vs{2, 5};
  auto p = [&](const std::string& s) { return parse_poly(s, vs, F); };
  std::vector<MultiPoly> f = {
      p("y4^2"),
      p("y2^2"),
      p("y3^2"),
      p("y0^2-y1^2"),
  };
  return BidegreeDivisor::make(3, 4, std::move(f), F);
}

// The singular conic bundle x0^2 y0^2 + x0^2 y1^2 + x1^2 y2^2.
inline QuadricBundle singular_conic_bundle(FieldPtr F) {
  VarSpec vs{2, 3};
  std::map<std::pair<uint32_t, uint32_t>, MultiPoly> s;
  s[{0, 0}] = parse_poly("x0^2", vs, F);
  s[{1, 1}] = parse_poly("x0^2", vs, F);
  s[{2, 2}] = parse_poly("x1^2", vs, F);
  return QuadricBundle::validate(1, 1, {0, 0, 0}, std::move(s), F);
}

// All F_q points of a y-only system in P^n.
inline std::vector<std::vector<uint32_t>> fq_points(const QuadricSystem& sys) {
  auto F = sys.field();
  std::vector<std::vector<uint32_t>> pts;
  for_each_proj_rep(sys.n() + 1, *F, [&](const std::vector<uint32_t>& v) {
    std::vector<FieldElem> flat;
    for (uint32_t c : v) flat.push_back(FieldElem::finite(c));
    for (const auto& q : sys.quadrics())
      if (!F->is_zero(q.eval(flat))) return true;
    pts.push_back(v);
    return true;
  });
  return pts;
}

}  // namespace qbtest
