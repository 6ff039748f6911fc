#include "fpgeom/field.hpp"

#include <numeric>

namespace fpgeom {

namespace {

bool is_odd_prime(fp_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (fp_t q = 3; std::uint64_t(q) * q <= p; q += 2) {
    if (p % q == 0) return false;
  }
  return true;
}

constexpr fp_t kSqrtTableCap = 1u << 20;

}  // namespace

FieldContext::FieldContext(fp_t p) : p_(p) {
  if (!is_odd_prime(p)) {
    throw Error("FieldContext: modulus " + std::to_string(p) +
                " is not an odd prime");
  }
  inv2_ = (p_ + 1) / 2;
  if (p_ <= kSqrtTableCap) {
    auto table = std::make_shared<std::vector<fp_t>>(p_, p_);
    for (fp_t x = 0; x <= (p_ - 1) / 2; ++x) {
      (*table)[fp_t((std::uint64_t(x) * x) % p_)] = x;
    }
    sqrt_table_ = std::move(table);
  }
}

fp_t FieldContext::pow(fp_t a, std::uint64_t e) const noexcept {
  std::uint64_t base = a % p_, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return fp_t(acc);
}

fp_t FieldContext::inv(fp_t a) const {
  if (a % p_ == 0) throw Error("FieldContext::inv: zero is not invertible");
  return pow(a % p_, p_ - 2);
}

fp_t FieldContext::from_ratio(long long num, long long den) const {
  if (den % static_cast<long long>(p_) == 0) {
    throw DenominatorDivisibleByP("iota(x/y): p divides the denominator");
  }
  long long g = std::gcd(num, den);
  if (g != 0) {
    num /= g;
    den /= g;
  }
  return mul(reduce_int(num), inv(reduce_int(den)));
}

bool FieldContext::is_square(fp_t a) const {
  a %= p_;
  if (a == 0) return true;
  return pow(a, (p_ - 1) / 2) == 1;
}

std::optional<fp_t> FieldContext::sqrt(fp_t a) const {
  if (!sqrt_table_) throw Error("FieldContext::sqrt: modulus too large");
  fp_t r = (*sqrt_table_)[a % p_];
  if (r == p_) return std::nullopt;
  return r;
}

std::vector<long long> tau_lift(const FpVec& v) {
  return std::vector<long long>(v.begin(), v.end());
}

FpVec iota_drop(const std::vector<long long>& w, const FieldContext& ctx) {
  FpVec out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = ctx.reduce_int(w[i]);
  return out;
}

}  // namespace fpgeom
