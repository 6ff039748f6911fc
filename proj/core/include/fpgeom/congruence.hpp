#pragma once

// Congruency taxonomy for configuration pairs: M-spherical witnesses,
// M-isometry, almost M-congruency per generating set, M-congruency, and a
// brute-force isometry search for tiny instances.

#include <cstdint>
#include <optional>
#include <vector>

#include "fpgeom/configuration.hpp"
#include "fpgeom/quadform.hpp"

namespace fpgeom {

struct SphereWitness {
  FpVec center;
  fp_t radius = 0;
};

// Solves ((x_j - x_0) 2A) . z = M(x_j) - M(x_0); any solution is a valid
// center (centers are not unique when the system is underdetermined).
// Requires M homogeneous. nullopt = not spherical.
std::optional<SphereWitness> find_sphere(const QuadraticForm& m,
                                         const Configuration& x);

// Sphericity criterion: every c with sum c_j = 0 and sum c_j x_j = 0 must
// satisfy sum c_j M'(x_j) = 0 for all M' sharing the associated matrix.
// Linear in c and in the M' perturbation, so kernel-basis checks suffice.
// Requires M non-degenerate homogeneous.
bool lmp_criterion(const QuadraticForm& m, const Configuration& x);

struct PairClassification {
  bool isometric = false;
  // One flag per generating set of X, in the analysis order.
  std::vector<std::vector<std::size_t>> generating_sets;
  std::vector<bool> almost_congruent;
  bool congruent = false;
};

// Congruency is decided without constructing the isometry: Y is M-congruent
// to X iff Y is almost M-congruent to X w.r.t. the canonical generating set
// and span(Y-Y) has the same dimension as span(X-X). Requires
// non-degenerate homogeneous M; throws SizeMismatch when |X| != |Y|.
PairClassification classify_pair(const QuadraticForm& m, const Configuration& x,
                                 const Configuration& y);

struct IsometryWitness {
  FpMatrix u;  // row-vector action n -> nU, with U A U^T = A
  FpVec shift;
};

struct IsometryLimits {
  std::uint64_t max_candidates = 1000000;  // bound on p^(d^2)
  std::size_t threads = 1;
};

// Exhaustive search over all d x d matrices, first witness in
// lexicographic order of the flattened matrix entries. Throws
// LimitExceeded when p^(d^2) exceeds the budget.
std::optional<IsometryWitness> isometry_oracle(const QuadraticForm& m,
                                               const Configuration& x,
                                               const Configuration& y,
                                               const IsometryLimits& limits = {});

}  // namespace fpgeom
