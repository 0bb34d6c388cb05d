#pragma once

#include "qb/field.hpp"

#include <vector>

namespace qb {

// A point of a product of projective spaces (or of the weighted toric
// ambient): one coordinate block per factor, each normalized so its first
// nonzero coordinate is 1.
struct ProductPoint {
  std::vector<std::vector<FieldElem>> blocks;

  static ProductPoint make(const FieldPtr& F, std::vector<std::vector<FieldElem>> blocks_raw);

  // Concatenation of all blocks (the evaluation order of a VarSpec).
  std::vector<FieldElem> flat() const;

  std::string str(const Field& F) const;
  bool operator==(const ProductPoint& o) const { return blocks == o.blocks; }
};

}  // namespace qb
