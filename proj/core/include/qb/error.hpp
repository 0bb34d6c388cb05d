#pragma once

#include <stdexcept>
#include <string>

namespace qb {

enum class Errc {
  // field construction
  CharTwo,
  NotPrime,
  ReducibleModulus,
  InfiniteField,
  // parsing
  SyntaxError,
  UnknownVariable,
  NegativeExponent,
  // polynomial algebra
  VarSpecMismatch,
  NonSquare,
  NotXOnly,
  NotSupported,
  // bundle validation
  DegreeIncompatible,
  NotHomogeneous,
  DegenerateForm,
  WeightsUnsorted,
  SliceTooDeep,
  DegenerateLine,
  // transforms
  DegreeTooSmall,
  ZeroVector,
  IndeterminacyLocus,
  NotOnVariety,
  SingularCenter,
  DegenerateProjection,
  // searches
  BudgetExceeded,
  WrongShape,
  DegenerateTail,
  // io
  BadInput,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg, std::size_t pos = npos)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code),
        pos_(pos) {}

  Errc code() const { return code_; }
  bool has_pos() const { return pos_ != npos; }
  std::size_t pos() const { return pos_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Errc code_;
  std::size_t pos_;
};

}  // namespace qb
