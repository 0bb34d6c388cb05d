#include "qb/field.hpp"

#include <algorithm>
#include <sstream>

namespace qb {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::CharTwo: return "CharTwo";
    case Errc::NotPrime: return "NotPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::InfiniteField: return "InfiniteField";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::NegativeExponent: return "NegativeExponent";
    case Errc::VarSpecMismatch: return "VarSpecMismatch";
    case Errc::NonSquare: return "NonSquare";
    case Errc::NotXOnly: return "NotXOnly";
    case Errc::NotSupported: return "NotSupported";
    case Errc::DegreeIncompatible: return "DegreeIncompatible";
    case Errc::NotHomogeneous: return "NotHomogeneous";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::WeightsUnsorted: return "WeightsUnsorted";
    case Errc::SliceTooDeep: return "SliceTooDeep";
    case Errc::DegenerateLine: return "DegenerateLine";
    case Errc::DegreeTooSmall: return "DegreeTooSmall";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::IndeterminacyLocus: return "IndeterminacyLocus";
    case Errc::NotOnVariety: return "NotOnVariety";
    case Errc::SingularCenter: return "SingularCenter";
    case Errc::DegenerateProjection: return "DegenerateProjection";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::WrongShape: return "WrongShape";
    case Errc::DegenerateTail: return "DegenerateTail";
    case Errc::BadInput: return "BadInput";
  }
  return "UnknownError";
}

bool int_is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  Int r = boost::multiprecision::sqrt(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

bool rat_is_square(const Rat& r) {
  if (r < 0) return false;
  return int_is_square(rat_num(r)) && int_is_square(rat_den(r));
}

std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << rat_num(r);
  if (rat_den(r) != 1) os << "/" << rat_den(r);
  return os.str();
}

Rat rat_parse(const std::string& text) {
  auto bad = [&] { throw Error(Errc::BadInput, "malformed rational '" + text + "'"); };
  std::string s = text;
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) bad();
    return Rat(num, den);
  } catch (const std::exception&) {
    bad();
  }
  return Rat();
}

bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(uint32_t p) {
  FieldSpec s;
  s.kind = FieldKind::Prime;
  s.p = p;
  s.a = 1;
  return s;
}

FieldSpec FieldSpec::extension(uint32_t p, uint32_t a, std::vector<uint32_t> modulus) {
  FieldSpec s;
  s.kind = FieldKind::Extension;
  s.p = p;
  s.a = a;
  s.modulus = std::move(modulus);
  return s;
}

FieldSpec FieldSpec::parse(const std::string& text) {
  if (text == "Q") return rationals();
  if (text.rfind("F:", 0) != 0)
    throw Error(Errc::BadInput, "field spec must be \"Q\", \"F:p\", \"F:p^a\" or \"F:p^a:[...]\", got '" + text + "'");
  std::string body = text.substr(2);
  std::string mod_part;
  auto colon = body.find(':');
  if (colon != std::string::npos) {
    mod_part = body.substr(colon + 1);
    body = body.substr(0, colon);
  }
  uint32_t p = 0, a = 1;
  auto caret = body.find('^');
  try {
    if (caret == std::string::npos) {
      p = static_cast<uint32_t>(std::stoul(body));
    } else {
      p = static_cast<uint32_t>(std::stoul(body.substr(0, caret)));
      a = static_cast<uint32_t>(std::stoul(body.substr(caret + 1)));
    }
  } catch (const std::exception&) {
    throw Error(Errc::BadInput, "malformed field spec '" + text + "'");
  }
  std::vector<uint32_t> modulus;
  if (!mod_part.empty()) {
    if (mod_part.front() != '[' || mod_part.back() != ']')
      throw Error(Errc::BadInput, "modulus must be [c0,c1,...,1]");
    std::string inner = mod_part.substr(1, mod_part.size() - 2);
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        modulus.push_back(static_cast<uint32_t>(std::stoul(tok)));
      } catch (const std::exception&) {
        throw Error(Errc::BadInput, "malformed modulus coefficient '" + tok + "'");
      }
    }
  }
  if (a == 1) return prime(p);
  return extension(p, a, std::move(modulus));
}

std::string FieldSpec::str() const {
  switch (kind) {
    case FieldKind::Rationals: return "Q";
    case FieldKind::Prime: return "F:" + std::to_string(p);
    case FieldKind::Extension: {
      std::string s = "F:" + std::to_string(p) + "^" + std::to_string(a) + ":[";
      for (size_t i = 0; i < modulus.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(modulus[i]);
      }
      return s + "]";
    }
  }
  return "?";
}

namespace {

// Univariate arithmetic over F_p on little-endian coefficient vectors,
// used only at construction time for modulus validation.
using Poly1 = std::vector<uint32_t>;

Poly1 poly1_mod(Poly1 f, const Poly1& m, uint32_t p) {
  // m monic
  while (f.size() >= m.size()) {
    uint32_t lead = f.back();
    if (lead != 0) {
      size_t shift = f.size() - m.size();
      for (size_t i = 0; i < m.size(); ++i) {
        uint64_t sub = (uint64_t)lead * m[i] % p;
        f[shift + i] = (uint32_t)((f[shift + i] + p - sub) % p);
      }
    }
    f.pop_back();
  }
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

Poly1 poly1_mulmod(const Poly1& a, const Poly1& b, const Poly1& m, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly1 r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (uint32_t)((r[i + j] + (uint64_t)a[i] * b[j]) % p);
  return poly1_mod(std::move(r), m, p);
}

Poly1 poly1_powmod(Poly1 base, uint64_t e, const Poly1& m, uint32_t p) {
  Poly1 r = {1};
  base = poly1_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly1_mulmod(r, base, m, p);
    base = poly1_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Poly1 poly1_gcd(Poly1 a, Poly1 b, uint32_t p) {
  auto inv_mod = [&](uint32_t x) {
    uint32_t r = 1;
    uint64_t b2 = x, e = p - 2;
    while (e) {
      if (e & 1) r = (uint32_t)((uint64_t)r * b2 % p);
      b2 = b2 * b2 % p;
      e >>= 1;
    }
    return r;
  };
  while (!b.empty()) {
    // a mod b, with b made monic on the fly
    uint32_t lc_inv = inv_mod(b.back());
    Poly1 bm = b;
    for (auto& c : bm) c = (uint32_t)((uint64_t)c * lc_inv % p);
    a = poly1_mod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

// Irreducibility over F_p: f of degree a is irreducible iff
// x^(p^a) = x mod f and gcd(x^(p^(a/r)) - x, f) = 1 for prime r | a.
bool poly1_irreducible(const Poly1& f, uint32_t p) {
  size_t a = f.size() - 1;
  if (a == 0) return false;
  auto xpow = [&](uint64_t e) {
    // x^(p^e) mod f by iterated Frobenius
    Poly1 r = {0, 1};
    for (uint64_t i = 0; i < e; ++i) r = poly1_powmod(r, p, f, p);
    return r;
  };
  Poly1 xq = xpow(a);
  Poly1 x = poly1_mod({0, 1}, f, p);
  if (xq != x) return false;
  for (uint32_t r = 2; r <= a; ++r) {
    if (a % r != 0 || !is_prime_u32(r)) continue;
    Poly1 g = xpow(a / r);
    // g - x
    Poly1 diff = g;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (uint32_t)((diff[1] + p - 1) % p);
    while (!diff.empty() && diff.back() == 0) diff.pop_back();
    Poly1 gc = poly1_gcd(f, diff, p);
    if (gc.size() != 1) return false;
  }
  return true;
}

Poly1 first_irreducible(uint32_t p, uint32_t a) {
  // monic degree-a polynomials in lexicographic coefficient order, i.e.
  // lower-part code c0 + c1 p + ... ascending
  uint64_t total = 1;
  for (uint32_t i = 0; i < a; ++i) total *= p;
  for (uint64_t code = 0; code < total; ++code) {
    Poly1 f(a + 1, 0);
    uint64_t c = code;
    for (uint32_t i = 0; i < a; ++i) {
      f[i] = (uint32_t)(c % p);
      c /= p;
    }
    f[a] = 1;
    if (poly1_irreducible(f, p)) return f;
  }
  throw Error(Errc::ReducibleModulus, "no irreducible polynomial found (impossible)");
}

}  // namespace

FieldPtr Field::make(FieldSpec spec) {
  if (spec.kind != FieldKind::Rationals) {
    if (spec.p == 2) throw Error(Errc::CharTwo, "base field must have characteristic != 2");
    if (!is_prime_u32(spec.p)) throw Error(Errc::NotPrime, std::to_string(spec.p) + " is not prime");
  }
  if (spec.kind == FieldKind::Extension) {
    if (spec.a < 2) throw Error(Errc::BadInput, "extension degree must be >= 2");
    if (spec.modulus.empty()) {
      spec.modulus = first_irreducible(spec.p, spec.a);
    } else {
      if (spec.modulus.size() != spec.a + 1 || spec.modulus.back() != 1)
        throw Error(Errc::BadInput, "modulus must be monic of degree a");
      for (auto& c : spec.modulus) c %= spec.p;
      if (spec.modulus.back() != 1)
        throw Error(Errc::BadInput, "modulus must be monic of degree a");
      if (!poly1_irreducible(spec.modulus, spec.p))
        throw Error(Errc::ReducibleModulus, "modulus is reducible over F_" + std::to_string(spec.p));
    }
  }
  auto f = FieldPtr(new Field(std::move(spec)));
  const_cast<Field*>(f.get())->init();
  return f;
}

void Field::init() {
  switch (spec_.kind) {
    case FieldKind::Rationals:
      q_ = 0;
      return;
    case FieldKind::Prime:
      q_ = spec_.p;
      return;
    case FieldKind::Extension: {
      q_ = 1;
      for (uint32_t i = 0; i < spec_.a; ++i) q_ *= spec_.p;
      if (q_ <= kTableCap) {
        mul_table_.assign(q_ * q_, 0);
        add_table_.assign(q_ * q_, 0);
        for (uint64_t x = 0; x < q_; ++x) {
          for (uint64_t y = x; y < q_; ++y) {
            uint32_t m = ext_mul_slow((uint32_t)x, (uint32_t)y);
            mul_table_[x * q_ + y] = (uint16_t)m;
            mul_table_[y * q_ + x] = (uint16_t)m;
            // digitwise addition mod p
            uint32_t s = 0, mult = 1;
            uint64_t xx = x, yy = y;
            for (uint32_t i = 0; i < spec_.a; ++i) {
              s += (uint32_t)((xx % spec_.p + yy % spec_.p) % spec_.p) * mult;
              mult *= spec_.p;
              xx /= spec_.p;
              yy /= spec_.p;
            }
            add_table_[x * q_ + y] = (uint16_t)s;
            add_table_[y * q_ + x] = (uint16_t)s;
          }
        }
        inv_table_.assign(q_, 0);
        for (uint64_t x = 1; x < q_; ++x) {
          if (inv_table_[x]) continue;
          for (uint64_t y = 1; y < q_; ++y) {
            if (mul_table_[x * q_ + y] == 1) {
              inv_table_[x] = (uint32_t)y;
              inv_table_[y] = (uint32_t)x;
              break;
            }
          }
        }
      }
      return;
    }
  }
}

uint32_t Field::ext_mul_slow(uint32_t x, uint32_t y) const {
  const uint32_t p = spec_.p, a = spec_.a;
  Poly1 xs(a, 0), ys(a, 0);
  for (uint32_t i = 0; i < a; ++i) {
    xs[i] = x % p;
    x /= p;
    ys[i] = y % p;
    y /= p;
  }
  Poly1 r = poly1_mulmod(xs, ys, spec_.modulus, p);
  uint32_t code = 0, mult = 1;
  for (uint32_t i = 0; i < a; ++i) {
    code += (i < r.size() ? r[i] : 0) * mult;
    mult *= p;
  }
  return code;
}

FieldElem Field::zero() const {
  return finite() ? FieldElem::finite(0) : FieldElem::rational(Rat(0));
}
FieldElem Field::one() const {
  return finite() ? FieldElem::finite(1) : FieldElem::rational(Rat(1));
}

FieldElem Field::from_int(long long v) const {
  if (!finite()) return FieldElem::rational(Rat(v));
  long long m = v % (long long)spec_.p;
  if (m < 0) m += spec_.p;
  return FieldElem::finite((uint64_t)m);
}

FieldElem Field::from_rat(const Rat& r) const {
  if (!finite()) return FieldElem::rational(r);
  Int num = rat_num(r), den = rat_den(r);
  Int pi(spec_.p);
  Int nm = num % pi;
  if (nm < 0) nm += pi;
  Int dm = den % pi;
  if (dm == 0) throw Error(Errc::BadInput, "denominator not invertible mod p");
  uint32_t n32 = nm.convert_to<uint32_t>();
  uint32_t d32 = dm.convert_to<uint32_t>();
  return FieldElem::finite(fmul(n32, finv(d32)));
}

uint32_t Field::fadd(uint32_t x, uint32_t y) const {
  if (spec_.kind == FieldKind::Prime) {
    uint32_t s = x + y;
    return s >= spec_.p ? s - spec_.p : s;
  }
  if (!add_table_.empty()) return add_table_[(uint64_t)x * q_ + y];
  uint32_t s = 0, mult = 1;
  for (uint32_t i = 0; i < spec_.a; ++i) {
    s += ((x % spec_.p) + (y % spec_.p)) % spec_.p * mult;
    mult *= spec_.p;
    x /= spec_.p;
    y /= spec_.p;
  }
  return s;
}

uint32_t Field::fneg(uint32_t x) const {
  if (spec_.kind == FieldKind::Prime) return x == 0 ? 0 : spec_.p - x;
  uint32_t s = 0, mult = 1, xx = x;
  for (uint32_t i = 0; i < spec_.a; ++i) {
    uint32_t d = xx % spec_.p;
    s += (d == 0 ? 0 : spec_.p - d) * mult;
    mult *= spec_.p;
    xx /= spec_.p;
  }
  return s;
}

uint32_t Field::fsub(uint32_t x, uint32_t y) const { return fadd(x, fneg(y)); }

uint32_t Field::fmul(uint32_t x, uint32_t y) const {
  if (spec_.kind == FieldKind::Prime) return (uint32_t)((uint64_t)x * y % spec_.p);
  if (!mul_table_.empty()) return mul_table_[(uint64_t)x * q_ + y];
  return ext_mul_slow(x, y);
}

uint32_t Field::fpow(uint32_t x, uint64_t e) const {
  uint32_t r = 1;
  while (e) {
    if (e & 1) r = fmul(r, x);
    x = fmul(x, x);
    e >>= 1;
  }
  return r;
}

uint32_t Field::finv(uint32_t x) const {
  if (x == 0) throw Error(Errc::BadInput, "division by zero");
  if (!inv_table_.empty()) return inv_table_[x];
  return fpow(x, q_ - 2);
}

FieldElem Field::add(const FieldElem& x, const FieldElem& y) const {
  if (!finite()) return FieldElem::rational(x.rat() + y.rat());
  return FieldElem::finite(fadd((uint32_t)x.code(), (uint32_t)y.code()));
}
FieldElem Field::sub(const FieldElem& x, const FieldElem& y) const {
  if (!finite()) return FieldElem::rational(x.rat() - y.rat());
  return FieldElem::finite(fsub((uint32_t)x.code(), (uint32_t)y.code()));
}
FieldElem Field::mul(const FieldElem& x, const FieldElem& y) const {
  if (!finite()) return FieldElem::rational(x.rat() * y.rat());
  return FieldElem::finite(fmul((uint32_t)x.code(), (uint32_t)y.code()));
}
FieldElem Field::neg(const FieldElem& x) const {
  if (!finite()) return FieldElem::rational(-x.rat());
  return FieldElem::finite(fneg((uint32_t)x.code()));
}
FieldElem Field::inv(const FieldElem& x) const {
  if (!finite()) {
    if (x.rat() == 0) throw Error(Errc::BadInput, "division by zero");
    return FieldElem::rational(Rat(1) / x.rat());
  }
  return FieldElem::finite(finv((uint32_t)x.code()));
}
FieldElem Field::div(const FieldElem& x, const FieldElem& y) const { return mul(x, inv(y)); }

FieldElem Field::pow(FieldElem base, uint64_t e) const {
  FieldElem r = one();
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

bool Field::is_zero(const FieldElem& x) const {
  return finite() ? x.code() == 0 : x.rat() == 0;
}
bool Field::is_one(const FieldElem& x) const {
  return finite() ? x.code() == 1 : x.rat() == 1;
}

std::vector<FieldElem> Field::enumerate() const {
  if (!finite()) throw Error(Errc::InfiniteField, "cannot enumerate the rationals");
  std::vector<FieldElem> out;
  out.reserve(q_);
  for (uint64_t c = 0; c < q_; ++c) out.push_back(FieldElem::finite(c));
  return out;
}

int Field::quad_character(const FieldElem& x) const {
  if (!finite()) throw Error(Errc::InfiniteField, "quadratic character needs a finite field");
  if (x.code() == 0) return 0;
  uint32_t r = fpow((uint32_t)x.code(), (q_ - 1) / 2);
  return r == 1 ? 1 : -1;
}

bool Field::is_square(const FieldElem& x) const {
  if (!finite()) return rat_is_square(x.rat());
  return quad_character(x) >= 0;
}

std::string Field::print(const FieldElem& x) const {
  if (!finite()) return rat_str(x.rat());
  return std::to_string(x.code());
}

FieldElem Field::parse_elem(const std::string& text) const {
  if (!finite()) return FieldElem::rational(rat_parse(text));
  return from_rat(rat_parse(text));
}

std::vector<uint32_t> Field::embedding_into(const Field& ext) const {
  if (!ext.finite() || !finite() || ext.p() != p() || ext.deg() % deg() != 0)
    throw Error(Errc::BadInput, "no embedding between these fields");
  const uint32_t a = deg();
  if (kind() == FieldKind::Prime) {
    std::vector<uint32_t> basis = {1};
    return basis;
  }
  // find the first root of our modulus in ext, in enumeration order
  for (uint64_t c = 0; c < ext.q(); ++c) {
    uint32_t val = 0;
    for (int i = (int)spec_.modulus.size() - 1; i >= 0; --i) {
      val = ext.fmul(val, (uint32_t)c);
      val = ext.fadd(val, spec_.modulus[i] % p());
    }
    if (val == 0) {
      std::vector<uint32_t> basis(a);
      uint32_t cur = 1;
      for (uint32_t i = 0; i < a; ++i) {
        basis[i] = cur;
        cur = ext.fmul(cur, (uint32_t)c);
      }
      return basis;
    }
  }
  throw Error(Errc::BadInput, "modulus has no root in the extension (impossible)");
}

}  // namespace qb
