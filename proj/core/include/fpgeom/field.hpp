#pragma once

// Exact residue arithmetic over F_p for an odd prime p, plus the lifting
// maps between residues and integer representatives.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpgeom {

using fp_t = std::uint32_t;
using FpVec = std::vector<fp_t>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct DenominatorDivisibleByP : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct LimitExceeded : Error { using Error::Error; };
struct InconsistentFamily : Error { using Error::Error; };
struct NotSphericalError : Error { using Error::Error; };
struct NotGenerating : Error { using Error::Error; };
struct LiftAmbiguous : Error { using Error::Error; };
struct EmptyBoxSet : Error { using Error::Error; };
struct UnboundedInput : Error { using Error::Error; };
struct NotOnSphere : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };

// Residues are stored canonically in [0, p-1]; signed values appear only in
// lifted integer data. Products go through 64-bit intermediates, so p must
// fit in a machine word.
class FieldContext {
 public:
  explicit FieldContext(fp_t p);

  fp_t p() const noexcept { return p_; }

  fp_t add(fp_t a, fp_t b) const noexcept {
    std::uint64_t s = std::uint64_t(a) + b;
    return fp_t(s >= p_ ? s - p_ : s);
  }
  fp_t sub(fp_t a, fp_t b) const noexcept {
    return a >= b ? a - b : fp_t(a + p_ - b);
  }
  fp_t neg(fp_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  fp_t mul(fp_t a, fp_t b) const noexcept {
    return fp_t((std::uint64_t(a) * b) % p_);
  }
  fp_t pow(fp_t a, std::uint64_t e) const noexcept;
  fp_t inv(fp_t a) const;  // throws on a == 0
  fp_t half() const noexcept { return inv2_; }

  // iota on Z: reduce an integer into [0, p-1].
  fp_t reduce_int(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return fp_t(r);
  }

  // iota on Q: the unique residue r with den * r = num (mod p).
  fp_t from_ratio(long long num, long long den) const;

  // Signed representative in (-p/2, p/2); inverse of iota on that range.
  long long signed_lift(fp_t a) const noexcept {
    return a <= (p_ - 1) / 2 ? static_cast<long long>(a)
                             : static_cast<long long>(a) - p_;
  }

  bool is_square(fp_t a) const;
  // Some square root of a, if one exists (table-backed; desk-scale p).
  std::optional<fp_t> sqrt(fp_t a) const;

  bool operator==(const FieldContext& o) const noexcept { return p_ == o.p_; }
  bool operator!=(const FieldContext& o) const noexcept { return p_ != o.p_; }

 private:
  fp_t p_ = 0;
  fp_t inv2_ = 0;
  std::shared_ptr<const std::vector<fp_t>> sqrt_table_;  // value p_ = no root
};

// tau: canonical representatives in {0, ..., p-1}.
std::vector<long long> tau_lift(const FpVec& v);

// iota on integer vectors; iota_drop(tau_lift(x)) == x.
FpVec iota_drop(const std::vector<long long>& w, const FieldContext& ctx);

}  // namespace fpgeom
