#pragma once

// Gowers box sets over subsets of F_p^d and the spherical Gowers norm
// U^s(V(M-r)). Sphere enumeration goes through the orthogonal-differences
// characterization instead of a full product scan.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fpgeom/quadform.hpp"

namespace fpgeom {

// Compensated (Neumaier) summation; accumulation order is fixed by the
// callers, so results are reproducible across thread counts.
class Neumaier {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0, comp_ = 0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  Neumaier re_, im_;
};

// Enumerated sphere V(M-r) in lexicographic order with point lookup.
class SphereGrid {
 public:
  SphereGrid(QuadraticForm m, fp_t r);

  const QuadraticForm& form() const noexcept { return form_; }
  fp_t radius() const noexcept { return r_; }
  const FieldContext& ctx() const noexcept { return form_.ctx(); }
  std::size_t dim() const noexcept { return form_.dimension(); }

  std::size_t size() const noexcept { return points_.size(); }
  const FpVec& point(std::size_t i) const { return points_[i]; }
  const std::vector<FpVec>& points() const noexcept { return points_; }

  std::uint64_t encode(const FpVec& n) const;
  std::optional<std::size_t> index_of(const FpVec& n) const;

 private:
  QuadraticForm form_;
  fp_t r_;
  std::vector<FpVec> points_;
  std::vector<std::uint32_t> index_;  // dense, keyed by encode()
};

// f: V(M-r) -> C with a magnitude bound.
class ComplexGrid {
 public:
  ComplexGrid(std::shared_ptr<const SphereGrid> grid,
              std::vector<std::complex<double>> values);

  static ComplexGrid constant(std::shared_ptr<const SphereGrid> grid,
                              std::complex<double> z);

  const SphereGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const SphereGrid>& shared_grid() const noexcept {
    return grid_;
  }
  std::complex<double> at(std::size_t i) const { return values_[i]; }
  const std::vector<std::complex<double>>& values() const noexcept {
    return values_;
  }
  double max_abs() const;

 private:
  std::shared_ptr<const SphereGrid> grid_;
  std::vector<std::complex<double>> values_;
};

struct BoxTuple {
  FpVec base;
  std::vector<FpVec> diffs;
};

// Exact Box_s of an arbitrary point set (hash membership over all
// difference tuples). Box_0 = the set itself.
std::vector<BoxTuple> box_set(const std::vector<FpVec>& omega, std::size_t s,
                              const FieldContext& ctx,
                              std::uint64_t budget = 100000000);

// Box_s(V(M-r) `intersect` (V+c)) through the characterization: pairwise
// A-orthogonal differences inside V, then base points on the shifted
// quadric intersection.
std::vector<BoxTuple> box_set_sphere(const QuadraticForm& m, fp_t r,
                                     const std::optional<AffineSubspace>& space,
                                     std::size_t s,
                                     std::uint64_t budget = 100000000);

bool box_sphere_membership(const QuadraticForm& m, fp_t r,
                           const std::optional<AffineSubspace>& space,
                           const BoxTuple& tuple);

struct GowersOptions {
  std::uint64_t budget = 400000000;
  std::size_t threads = 1;
};

struct GowersResult {
  double norm = 0;
  std::uint64_t box_count = 0;
  // Box-count reference p^{(s+1)d - (s(s+1)/2 + 1)} and its hypothesis
  // rank(M) >= s^2 + s + 3; below the rank threshold the deviation is
  // reported, never asserted.
  long double reference_count = 0;
  double count_ratio_deviation = 0;
  bool counting_hypothesis_met = false;
};

// |E over Box_s(V(M-r)) of the conjugated corner product|^(1/2^s).
// Throws EmptyBoxSet when Box_s is empty.
GowersResult gowers_norm(const ComplexGrid& f, std::size_t s,
                         const GowersOptions& opt = {});

}  // namespace fpgeom
