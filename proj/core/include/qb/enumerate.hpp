#pragma once

#include "qb/field.hpp"
#include "qb/point.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace qb {

// ---------- deterministic parallelism ----------

// Runs chunk_fn(0..nchunks-1) on a small thread pool and reduces the results
// in chunk order, so the outcome is independent of scheduling.
void run_chunks(size_t nchunks, unsigned threads, const std::function<void(size_t)>& chunk_fn);

template <class T, class Fn>
std::vector<T> map_chunks(size_t nchunks, unsigned threads, Fn chunk_fn) {
  std::vector<T> out(nchunks);
  run_chunks(nchunks, threads, [&](size_t i) { out[i] = chunk_fn(i); });
  return out;
}

unsigned default_threads();

// ---------- projective representatives over F_q ----------

// Representatives of P^{len-1}(F_q), first nonzero coordinate 1, in plain
// lexicographic ascending order of the coordinate tuple (codes 0..q-1).
// fn receives the code vector; return false from fn to stop early.
// Returns false iff stopped early.
bool for_each_proj_rep(uint32_t len, const Field& F,
                       const std::function<bool(const std::vector<uint32_t>&)>& fn);

uint64_t proj_space_size(uint32_t len, uint64_t q);  // (q^len - 1)/(q - 1)

// Materialized representatives (desk scale; len and q small).
std::vector<std::vector<uint32_t>> proj_reps(uint32_t len, const Field& F);

// ---------- height-ordered rational representatives ----------

// Canonical integer representative: primitive vector (gcd 1), first nonzero
// coordinate positive. Height = max |coordinate|.
// Stream order: increasing height; within one height, lexicographic on the
// coordinate tuple under the order 0 < 1 < -1 < 2 < -2 < ...
struct HeightRep {
  std::vector<long long> coords;
  long long height;
};

// All canonical representatives of P^{len-1}(Q) with height <= B, stream
// order. Materialized: use for small budgets only.
std::vector<HeightRep> height_reps_upto(uint32_t len, long long B);

// Callback over canonical representatives with height <= B in no particular
// order (used by counting paths; chunk over the first coordinate pattern).
// nonzero_coords: indices whose coordinate must not vanish (chart
// constraints). fn is called once per representative.
void for_each_height_rep(uint32_t len, long long B, const std::vector<uint32_t>& nonzero_coords,
                         const std::function<void(const std::vector<long long>&)>& fn);

// Chunked variant: splits the representative set into independent chunks for
// map_chunks. chunk_count() first, then enumerate chunk i.
struct HeightChunks {
  uint32_t len;
  long long B;
  std::vector<uint32_t> nonzero_coords;

  size_t chunk_count() const;
  void enumerate(size_t chunk,
                 const std::function<void(const std::vector<long long>&)>& fn) const;
};

// Height of a pair under the two conventions.
enum class HeightConvention { MaxOfFactors, ProductOfFactors };

// Stream of product points over Q ordered by height then concatenated-tuple
// lex (same coordinate order as above). Calls fn(blocks, height); return
// false to stop. Returns false iff stopped early.
bool product_height_stream(const std::vector<uint32_t>& block_lens, long long B,
                           HeightConvention conv,
                           const std::function<bool(const std::vector<std::vector<long long>>&,
                                                    long long)>& fn);

// Product points over F_q in nested lexicographic order of representatives.
bool product_proj_stream(const std::vector<uint32_t>& block_lens, const Field& F,
                         const std::function<bool(const std::vector<std::vector<uint32_t>>&)>& fn);

}  // namespace qb
