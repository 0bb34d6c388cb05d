#include "qb/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>
#include <thread>

namespace qb {

ProductPoint ProductPoint::make(const FieldPtr& F, std::vector<std::vector<FieldElem>> blocks_raw) {
  ProductPoint p;
  for (auto& blk : blocks_raw) {
    size_t lead = blk.size();
    for (size_t i = 0; i < blk.size(); ++i) {
      if (!F->is_zero(blk[i])) {
        lead = i;
        break;
      }
    }
    if (lead == blk.size()) throw Error(Errc::ZeroVector, "projective block is all-zero");
    FieldElem inv = F->inv(blk[lead]);
    for (auto& c : blk) c = F->mul(c, inv);
    p.blocks.push_back(std::move(blk));
  }
  return p;
}

std::vector<FieldElem> ProductPoint::flat() const {
  std::vector<FieldElem> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string ProductPoint::str(const Field& F) const {
  std::ostringstream os;
  os << "(";
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (b) os << ",";
    os << "[";
    for (size_t i = 0; i < blocks[b].size(); ++i) {
      if (i) os << ":";
      os << F.print(blocks[b][i]);
    }
    os << "]";
  }
  os << ")";
  return os.str();
}

void run_chunks(size_t nchunks, unsigned threads, const std::function<void(size_t)>& chunk_fn) {
  if (threads == 0) threads = 1;
  if (threads == 1 || nchunks <= 1) {
    for (size_t i = 0; i < nchunks; ++i) chunk_fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= nchunks) return;
      chunk_fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned nt = (unsigned)std::min<size_t>(threads, nchunks);
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

unsigned default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? n : 1;
}

uint64_t proj_space_size(uint32_t len, uint64_t q) {
  uint64_t total = 0, pw = 1;
  for (uint32_t i = 0; i < len; ++i) {
    total += pw;
    pw *= q;
  }
  return total;
}

bool for_each_proj_rep(uint32_t len, const Field& F,
                       const std::function<bool(const std::vector<uint32_t>&)>& fn) {
  const uint64_t q = F.q();
  std::vector<uint32_t> v(len, 0);
  // lexicographic ascending <=> leading 1 at position k from last to first
  for (int k = (int)len - 1; k >= 0; --k) {
    std::fill(v.begin(), v.end(), 0);
    v[k] = 1;
    const uint32_t m = len - 1 - (uint32_t)k;
    uint64_t total = 1;
    for (uint32_t i = 0; i < m; ++i) total *= q;
    for (uint64_t code = 0; code < total; ++code) {
      uint64_t c = code;
      for (uint32_t i = m; i-- > 0;) {
        v[k + 1 + i] = (uint32_t)(c % q);
        c /= q;
      }
      if (!fn(v)) return false;
    }
  }
  return true;
}

std::vector<std::vector<uint32_t>> proj_reps(uint32_t len, const Field& F) {
  std::vector<std::vector<uint32_t>> out;
  out.reserve(proj_space_size(len, F.q()));
  for_each_proj_rep(len, F, [&](const std::vector<uint32_t>& v) {
    out.push_back(v);
    return true;
  });
  return out;
}

namespace {

// coordinate order 0 < 1 < -1 < 2 < -2 < ...
inline uint64_t coord_key(long long v) {
  uint64_t a = (uint64_t)(v < 0 ? -v : v);
  return a * 2 + (v < 0 ? 1 : 0);
}

long long gcd_ll(long long a, long long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct RepGen {
  uint32_t len = 0;
  long long B = 0;
  const std::vector<uint32_t>* nonzero = nullptr;
  std::function<bool(const std::vector<long long>&, long long)> sink;

  std::vector<long long> vals;  // 0, 1, -1, 2, -2, ..., B, -B
  std::vector<long long> cur;
  bool stopped = false;

  void prepare() {
    vals.clear();
    vals.push_back(0);
    for (long long a = 1; a <= B; ++a) {
      vals.push_back(a);
      vals.push_back(-a);
    }
    cur.assign(len, 0);
  }

  bool coord_must_be_nonzero(uint32_t idx) const {
    if (!nonzero) return false;
    return std::find(nonzero->begin(), nonzero->end(), idx) != nonzero->end();
  }

  // pos: next coordinate; seen_nonzero: some earlier coordinate != 0 (the
  // first one positive by construction); g: gcd so far; mx: max |coord|.
  void rec(uint32_t pos, bool seen_nonzero, long long g, long long mx) {
    if (stopped) return;
    if (pos == len) {
      if (!seen_nonzero || g != 1) return;
      if (!sink(cur, mx)) stopped = true;
      return;
    }
    for (long long v : vals) {
      if (stopped) return;
      if (!seen_nonzero && v < 0) continue;
      if (v == 0 && coord_must_be_nonzero(pos)) continue;
      cur[pos] = v;
      long long a = v < 0 ? -v : v;
      rec(pos + 1, seen_nonzero || v != 0, gcd_ll(g, a), std::max(mx, a));
    }
    cur[pos] = 0;
  }

  void run() {
    prepare();
    rec(0, false, 0, 0);
  }
};

}  // namespace

std::vector<HeightRep> height_reps_upto(uint32_t len, long long B) {
  std::vector<HeightRep> out;
  RepGen g;
  g.len = len;
  g.B = B;
  g.sink = [&](const std::vector<long long>& v, long long h) {
    out.push_back({v, h});
    return true;
  };
  g.run();
  std::stable_sort(out.begin(), out.end(), [](const HeightRep& a, const HeightRep& b) {
    if (a.height != b.height) return a.height < b.height;
    for (size_t i = 0; i < a.coords.size(); ++i) {
      uint64_t ka = coord_key(a.coords[i]), kb = coord_key(b.coords[i]);
      if (ka != kb) return ka < kb;
    }
    return false;
  });
  return out;
}

void for_each_height_rep(uint32_t len, long long B, const std::vector<uint32_t>& nonzero_coords,
                         const std::function<void(const std::vector<long long>&)>& fn) {
  RepGen g;
  g.len = len;
  g.B = B;
  g.nonzero = &nonzero_coords;
  g.sink = [&](const std::vector<long long>& v, long long) {
    fn(v);
    return true;
  };
  g.run();
}

size_t HeightChunks::chunk_count() const { return (size_t)B + 1; }

void HeightChunks::enumerate(size_t chunk,
                             const std::function<void(const std::vector<long long>&)>& fn) const {
  // chunk k fixes coords[0] = k (canonical first coordinates are >= 0)
  long long c0 = (long long)chunk;
  if (c0 == 0 &&
      std::find(nonzero_coords.begin(), nonzero_coords.end(), 0u) != nonzero_coords.end())
    return;
  RepGen g;
  g.len = len;
  g.B = B;
  g.nonzero = &nonzero_coords;
  g.sink = [&](const std::vector<long long>& v, long long) {
    fn(v);
    return true;
  };
  g.prepare();
  g.cur[0] = c0;
  g.rec(1, c0 != 0, c0, c0);
}

bool product_height_stream(const std::vector<uint32_t>& block_lens, long long B,
                           HeightConvention conv,
                           const std::function<bool(const std::vector<std::vector<long long>>&,
                                                    long long)>& fn) {
  std::vector<std::vector<HeightRep>> lists;
  for (uint32_t len : block_lens) lists.push_back(height_reps_upto(len, B));
  // per total height H, tuples in concatenated lex order: sort each block
  // into pure tuple-lex order (heights kept alongside)
  for (auto& l : lists) {
    std::stable_sort(l.begin(), l.end(), [](const HeightRep& a, const HeightRep& b) {
      for (size_t i = 0; i < a.coords.size(); ++i) {
        uint64_t ka = coord_key(a.coords[i]), kb = coord_key(b.coords[i]);
        if (ka != kb) return ka < kb;
      }
      return false;
    });
  }
  std::vector<std::vector<long long>> tuple(block_lens.size());
  for (long long H = 1; H <= B; ++H) {
    std::function<bool(size_t, long long)> rec = [&](size_t bi, long long acc) -> bool {
      if (bi == lists.size()) return acc == H ? fn(tuple, H) : true;
      for (const auto& r : lists[bi]) {
        long long next;
        if (conv == HeightConvention::MaxOfFactors) {
          if (r.height > H) continue;
          next = std::max(acc, r.height);
        } else {
          next = (bi == 0 ? r.height : acc * r.height);
          if (next > H) continue;
        }
        tuple[bi] = r.coords;
        if (!rec(bi + 1, next)) return false;
      }
      return true;
    };
    long long init = (conv == HeightConvention::MaxOfFactors) ? 0 : 1;
    if (!rec(0, init)) return false;
  }
  return true;
}

bool product_proj_stream(const std::vector<uint32_t>& block_lens, const Field& F,
                         const std::function<bool(const std::vector<std::vector<uint32_t>>&)>& fn) {
  std::vector<std::vector<std::vector<uint32_t>>> lists;
  for (uint32_t len : block_lens) lists.push_back(proj_reps(len, F));
  std::vector<std::vector<uint32_t>> tuple(block_lens.size());
  std::function<bool(size_t)> rec = [&](size_t bi) -> bool {
    if (bi == lists.size()) return fn(tuple);
    for (const auto& r : lists[bi]) {
      tuple[bi] = r;
      if (!rec(bi + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

}  // namespace qb
