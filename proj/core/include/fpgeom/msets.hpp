#pragma once

// M-integral quadratic functions and M-families: coefficient-vector
// classification, standard representations, fiberwise variety enumeration,
// I-projections with fiber evaluators, and the Omega set builders for
// spherical configurations.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fpgeom/configuration.hpp"
#include "fpgeom/quadform.hpp"

namespace fpgeom {

// F(n_0, ..., n_{k-1}) = sum_{i<=j} b_{i,j} (n_i A) . n_j
//                      + sum_i v_i . n_i + u,
// with a shared symmetric matrix A. Variables are d-dimensional blocks.
class MQuadraticFunction {
 public:
  MQuadraticFunction(FieldContext ctx, std::shared_ptr<const FpMatrix> a,
                     std::size_t arity, std::vector<fp_t> b,
                     std::vector<FpVec> v, fp_t u);

  static MQuadraticFunction zero(FieldContext ctx,
                                 std::shared_ptr<const FpMatrix> a,
                                 std::size_t arity);

  const FieldContext& ctx() const noexcept { return ctx_; }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t block_dim() const noexcept { return a_->rows(); }
  const std::shared_ptr<const FpMatrix>& shared_matrix() const noexcept {
    return a_;
  }

  // i <= j required.
  fp_t b(std::size_t i, std::size_t j) const { return b_[pair_index(i, j)]; }
  void set_b(std::size_t i, std::size_t j, fp_t value) {
    b_[pair_index(i, j)] = value;
  }
  void add_b(std::size_t i, std::size_t j, fp_t value) {
    b_[pair_index(i, j)] = ctx_.add(b_[pair_index(i, j)], value);
  }
  const FpVec& v(std::size_t i) const { return v_[i]; }
  FpVec& v(std::size_t i) { return v_[i]; }
  fp_t u() const noexcept { return u_; }
  void set_u(fp_t value) { u_ = value % ctx_.p(); }

  bool is_pure() const;

  fp_t eval(const std::vector<FpVec>& n) const;

  // Coefficients serialized in the fixed order: block for the last
  // variable first (its self pair, then cross pairs downward, then its
  // linear part), down to the first variable, then the constant term.
  FpVec vm_vector() const;
  FpVec vm_prime_vector() const;  // vm_vector without the constant slot

  static MQuadraticFunction from_vm(FieldContext ctx,
                                    std::shared_ptr<const FpMatrix> a,
                                    std::size_t arity, const FpVec& row);

  // F(L(.) + shift) for a d-integral linear substitution: old variable i
  // becomes sum_m coeffs[m][i] * (new variable m) + shifts[i]. The result
  // has arity coeffs.size().
  MQuadraticFunction compose(const std::vector<FpVec>& coeffs,
                             const std::vector<FpVec>& shifts) const;

  static std::size_t pair_index(std::size_t i, std::size_t j) {
    return j * (j + 1) / 2 + i;
  }
  static std::size_t vm_length(std::size_t arity, std::size_t d) {
    return arity * (arity + 1) / 2 + arity * d + 1;
  }

 private:
  FieldContext ctx_;
  std::shared_ptr<const FpMatrix> a_;
  std::size_t arity_;
  std::vector<fp_t> b_;   // upper triangle, pair_index layout
  std::vector<FpVec> v_;  // arity entries of length d
  fp_t u_;
};

class MFamily {
 public:
  MFamily(FieldContext ctx, std::shared_ptr<const FpMatrix> a,
          std::size_t arity);
  explicit MFamily(std::vector<MQuadraticFunction> fns);  // non-empty

  const FieldContext& ctx() const noexcept { return ctx_; }
  const std::shared_ptr<const FpMatrix>& shared_matrix() const noexcept {
    return a_;
  }
  std::size_t arity() const noexcept { return arity_; }
  std::size_t block_dim() const noexcept { return a_->rows(); }
  std::size_t size() const noexcept { return fns_.size(); }
  bool empty() const noexcept { return fns_.empty(); }
  const std::vector<MQuadraticFunction>& functions() const noexcept {
    return fns_;
  }
  const MQuadraticFunction& operator[](std::size_t i) const { return fns_[i]; }

  void push_back(MQuadraticFunction f);

 private:
  FieldContext ctx_;
  std::shared_ptr<const FpMatrix> a_;
  std::size_t arity_;
  std::vector<MQuadraticFunction> fns_;
};

struct FamilyClassification {
  bool pure = false;
  bool consistent = false;
  bool independent = false;
  std::size_t dimension = 0;  // rank of the stacked v' rows
};

FamilyClassification family_classify(const MFamily& fam);

struct StandardRep {
  MFamily family;  // RREF rows rebuilt as functions, pivot order
  std::vector<std::size_t> dimension_vector;  // per variable, 0-based
  std::size_t total_codim = 0;
};

// Row-reduces the coefficient stack and regroups by the highest variable
// each function depends on. Throws InconsistentFamily.
StandardRep standard_representation(const MFamily& fam);

struct VarietyOptions {
  std::uint64_t budget = 400000000;  // fibers visited across all blocks
  std::size_t threads = 1;
};

using TupleVisitor = std::function<void(const std::vector<FpVec>&)>;

// Exact common-zero enumeration, coordinate block by coordinate block
// through the standard representation: fix n_0, solve the functions that
// depend only on n_0, recurse. Work is the sum over fibers rather than
// the full product space.
class VarietyScanner {
 public:
  explicit VarietyScanner(const MFamily& fam);

  bool inconsistent() const noexcept { return inconsistent_; }
  // Blocks pin the first scalar coordinate; the grid depends only on p.
  std::size_t block_count() const noexcept;
  std::uint64_t scan_block(std::size_t block, const TupleVisitor& visit,
                           std::uint64_t* work_budget = nullptr) const;

  std::uint64_t count(const VarietyOptions& opt = {}) const;
  // Sequential lexicographic scan (single visitor thread).
  std::uint64_t scan(const TupleVisitor& visit,
                     const VarietyOptions& opt = {}) const;

 private:
  struct StageRow {
    MQuadraticFunction fn;
    std::size_t top;  // highest variable with a nonzero coefficient
  };
  FieldContext ctx_;
  std::shared_ptr<const FpMatrix> a_;
  std::size_t arity_, dim_;
  bool inconsistent_ = false;
  std::vector<std::vector<StageRow>> stages_;  // by top variable

  std::uint64_t recurse(std::size_t stage, std::vector<FpVec>& prefix,
                        std::vector<FpVec>& prefix_a,
                        const TupleVisitor& visit, std::uint64_t& work,
                        std::uint64_t budget, int pinned_first) const;
};

std::uint64_t enumerate_variety(const MFamily& fam,
                                const VarietyOptions& opt = {},
                                const TupleVisitor& visit = nullptr);

std::vector<std::vector<FpVec>> variety_points(const MFamily& fam,
                                               const VarietyOptions& opt = {});

struct IDecomposition {
  std::vector<std::size_t> vars;  // I, ascending 0-based variable indices
  // Spans exactly the members of span(fam) independent of the complement
  // variables, reindexed to arity |I|.
  MFamily projection;
  // Rows depending on complement variables, at full arity.
  MFamily complement;
};

IDecomposition project_decompose(const MFamily& fam,
                                 const std::vector<std::size_t>& vars);

// Substitutes fixed values for the I variables of the complement part,
// producing the fiber family over the complement variables (ascending).
MFamily fiber_family(const MFamily& complement,
                     const std::vector<std::size_t>& vars,
                     const std::vector<FpVec>& fixed);

// ---- Omega builders -------------------------------------------------------

// The family over (F_p^d)^{|I|} cutting out Omega_I: sphere conditions
// M(x_i) = r for i in I together with the pairwise isometry conditions
// M(x_i - x_j) = M(v_i - v_j). Checks that X is M-spherical and that I
// generates X.
MFamily omega_index_family(const QuadraticForm& m, fp_t r,
                           const Configuration& x,
                           const std::vector<std::size_t>& index_set);

// The relative self-product Omega_I x_i Omega_I over (F_p^d)^{2|I|-1};
// variable order: x_i, then the plus copy of I\{i}, then the minus copy.
MFamily omega_product_family(const QuadraticForm& m, fp_t r,
                             const Configuration& x,
                             const std::vector<std::size_t>& index_set,
                             std::size_t i);

// Gowers extension: t difference variables appended, acting on the i0
// coordinate; every cube corner must land in Omega_I.
MFamily omega_gowers_family(const QuadraticForm& m, fp_t r,
                            const Configuration& x,
                            const std::vector<std::size_t>& index_set,
                            std::size_t i0, std::size_t t);

// Enumerated Omega = L_I(Omega_I) as (k+s)-tuples, sorted lexicographically.
std::vector<std::vector<FpVec>> omega_tuples(const QuadraticForm& m, fp_t r,
                                             const Configuration& x,
                                             const GeneratingData& g,
                                             const VarietyOptions& opt = {});

// Enumerated Omega x_i Omega as (x_i, plus copy, minus copy) tuples over
// J, sorted lexicographically.
std::vector<std::vector<FpVec>> omega_product_tuples(
    const QuadraticForm& m, fp_t r, const Configuration& x,
    const GeneratingData& g, std::size_t i, const VarietyOptions& opt = {});

}  // namespace fpgeom
