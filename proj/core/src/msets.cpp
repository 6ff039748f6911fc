#include "fpgeom/msets.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "fpgeom/congruence.hpp"
#include "fpgeom/parallel.hpp"

namespace fpgeom {

namespace {

struct Slot {
  enum Kind { kQuad, kLin, kConst } kind;
  std::size_t i = 0, j = 0;  // quad: pair i <= j; lin: variable i, coord j
};

// Serialization order: blocks for the last variable first. Block for
// variable bi holds the pairs (bi,bi), (bi-1,bi), ..., (0,bi), then the
// linear part v_bi; the constant term is the final slot.
std::vector<Slot> vm_slots(std::size_t arity, std::size_t d) {
  std::vector<Slot> slots;
  slots.reserve(MQuadraticFunction::vm_length(arity, d));
  for (std::size_t bi = arity; bi-- > 0;) {
    for (std::size_t t = bi + 1; t-- > 0;) {
      slots.push_back({Slot::kQuad, t, bi});
    }
    for (std::size_t c = 0; c < d; ++c) {
      slots.push_back({Slot::kLin, bi, c});
    }
  }
  slots.push_back({Slot::kConst, 0, 0});
  return slots;
}

}  // namespace

MQuadraticFunction::MQuadraticFunction(FieldContext ctx,
                                       std::shared_ptr<const FpMatrix> a,
                                       std::size_t arity, std::vector<fp_t> b,
                                       std::vector<FpVec> v, fp_t u)
    : ctx_(ctx),
      a_(std::move(a)),
      arity_(arity),
      b_(std::move(b)),
      v_(std::move(v)),
      u_(u % ctx.p()) {
  if (!a_ || a_->rows() != a_->cols()) {
    throw Error("MQuadraticFunction: bad associated matrix");
  }
  if (b_.size() != arity_ * (arity_ + 1) / 2 || v_.size() != arity_) {
    throw DimensionMismatch("MQuadraticFunction: coefficient sizes");
  }
  for (const auto& vi : v_) {
    if (vi.size() != a_->rows()) {
      throw DimensionMismatch("MQuadraticFunction: linear part dimension");
    }
  }
}

MQuadraticFunction MQuadraticFunction::zero(FieldContext ctx,
                                            std::shared_ptr<const FpMatrix> a,
                                            std::size_t arity) {
  std::size_t d = a->rows();
  return MQuadraticFunction(ctx, std::move(a), arity,
                            std::vector<fp_t>(arity * (arity + 1) / 2, 0),
                            std::vector<FpVec>(arity, FpVec(d, 0)), 0);
}

bool MQuadraticFunction::is_pure() const {
  for (const auto& vi : v_) {
    if (!is_zero(vi)) return false;
  }
  return true;
}

fp_t MQuadraticFunction::eval(const std::vector<FpVec>& n) const {
  if (n.size() != arity_) throw DimensionMismatch("MQuadraticFunction::eval");
  fp_t acc = u_;
  std::vector<FpVec> na(arity_);
  for (std::size_t i = 0; i < arity_; ++i) {
    na[i] = row_times_matrix(ctx_, n[i], *a_);
  }
  for (std::size_t j = 0; j < arity_; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      fp_t coef = b(i, j);
      if (coef != 0) acc = ctx_.add(acc, ctx_.mul(coef, dot(ctx_, na[i], n[j])));
    }
    acc = ctx_.add(acc, dot(ctx_, v_[j], n[j]));
  }
  return acc;
}

FpVec MQuadraticFunction::vm_vector() const {
  const std::size_t d = block_dim();
  FpVec out;
  out.reserve(vm_length(arity_, d));
  for (const Slot& s : vm_slots(arity_, d)) {
    switch (s.kind) {
      case Slot::kQuad: out.push_back(b(s.i, s.j)); break;
      case Slot::kLin: out.push_back(v_[s.i][s.j]); break;
      case Slot::kConst: out.push_back(u_); break;
    }
  }
  return out;
}

FpVec MQuadraticFunction::vm_prime_vector() const {
  FpVec out = vm_vector();
  out.pop_back();
  return out;
}

MQuadraticFunction MQuadraticFunction::from_vm(FieldContext ctx,
                                               std::shared_ptr<const FpMatrix> a,
                                               std::size_t arity,
                                               const FpVec& row) {
  const std::size_t d = a->rows();
  if (row.size() != vm_length(arity, d)) {
    throw DimensionMismatch("MQuadraticFunction::from_vm");
  }
  MQuadraticFunction f = zero(ctx, std::move(a), arity);
  std::size_t col = 0;
  for (const Slot& s : vm_slots(arity, d)) {
    const fp_t value = row[col++];
    switch (s.kind) {
      case Slot::kQuad: f.set_b(s.i, s.j, value); break;
      case Slot::kLin: f.v_[s.i][s.j] = value; break;
      case Slot::kConst: f.u_ = value; break;
    }
  }
  return f;
}

MQuadraticFunction MQuadraticFunction::compose(
    const std::vector<FpVec>& coeffs, const std::vector<FpVec>& shifts) const {
  const std::size_t newk = coeffs.size();
  const std::size_t d = block_dim();
  for (const auto& row : coeffs) {
    if (row.size() != arity_) throw DimensionMismatch("compose: coeff row");
  }
  if (shifts.size() != arity_) throw DimensionMismatch("compose: shifts");

  // Symmetrized quadratic coefficients: beta_ii = b_ii, beta_ij = b_ij / 2.
  const fp_t inv2 = ctx_.half();
  auto beta = [&](std::size_t i, std::size_t j) -> fp_t {
    if (i == j) return b(i, i);
    fp_t raw = i < j ? b(i, j) : b(j, i);
    return ctx_.mul(raw, inv2);
  };

  std::vector<FpVec> ca(arity_);  // (shift_i) A
  for (std::size_t i = 0; i < arity_; ++i) {
    ca[i] = row_times_matrix(ctx_, shifts[i], *a_);
  }

  MQuadraticFunction out = zero(ctx_, a_, newk);
  const fp_t two = 2 % ctx_.p();
  for (std::size_t m = 0; m < newk; ++m) {
    for (std::size_t mm = m; mm < newk; ++mm) {
      fp_t acc = 0;
      for (std::size_t i = 0; i < arity_; ++i) {
        if (coeffs[m][i] == 0) continue;
        for (std::size_t j = 0; j < arity_; ++j) {
          if (coeffs[mm][j] == 0) continue;
          acc = ctx_.add(
              acc, ctx_.mul(ctx_.mul(coeffs[m][i], coeffs[mm][j]), beta(i, j)));
        }
      }
      out.set_b(m, mm, m == mm ? acc : ctx_.mul(two, acc));
    }
  }
  for (std::size_t m = 0; m < newk; ++m) {
    FpVec lin(d, 0);
    for (std::size_t i = 0; i < arity_; ++i) {
      if (coeffs[m][i] == 0) continue;
      for (std::size_t c = 0; c < d; ++c) {
        lin[c] = ctx_.add(lin[c], ctx_.mul(coeffs[m][i], v_[i][c]));
      }
      for (std::size_t j = 0; j < arity_; ++j) {
        fp_t f = ctx_.mul(ctx_.mul(two, coeffs[m][i]), beta(i, j));
        if (f == 0) continue;
        for (std::size_t c = 0; c < d; ++c) {
          lin[c] = ctx_.add(lin[c], ctx_.mul(f, ca[j][c]));
        }
      }
    }
    out.v_[m] = std::move(lin);
  }
  fp_t cst = u_;
  for (std::size_t i = 0; i < arity_; ++i) {
    cst = ctx_.add(cst, dot(ctx_, v_[i], shifts[i]));
    for (std::size_t j = 0; j < arity_; ++j) {
      cst = ctx_.add(cst, ctx_.mul(beta(i, j), dot(ctx_, ca[i], shifts[j])));
    }
  }
  out.u_ = cst;
  return out;
}

MFamily::MFamily(FieldContext ctx, std::shared_ptr<const FpMatrix> a,
                 std::size_t arity)
    : ctx_(ctx), a_(std::move(a)), arity_(arity) {
  if (!a_ || a_->rows() != a_->cols()) throw Error("MFamily: bad matrix");
}

MFamily::MFamily(std::vector<MQuadraticFunction> fns)
    : ctx_(fns.at(0).ctx()),
      a_(fns.at(0).shared_matrix()),
      arity_(fns.at(0).arity()) {
  for (auto& f : fns) push_back(std::move(f));
}

void MFamily::push_back(MQuadraticFunction f) {
  if (f.arity() != arity_ || f.shared_matrix()->rows() != a_->rows() ||
      !(*f.shared_matrix() == *a_) || f.ctx() != ctx_) {
    throw Error("MFamily: members must share the matrix and arity");
  }
  fns_.push_back(std::move(f));
}

FamilyClassification family_classify(const MFamily& fam) {
  FamilyClassification out;
  out.pure = true;
  for (const auto& f : fam.functions()) out.pure = out.pure && f.is_pure();
  if (fam.empty()) {
    out.consistent = true;
    out.independent = true;
    out.dimension = 0;
    return out;
  }
  FpMatrix full, prime;
  for (const auto& f : fam.functions()) {
    full.append_row(f.vm_vector());
    prime.append_row(f.vm_prime_vector());
  }
  const std::size_t rank_full = rank(fam.ctx(), full);
  const std::size_t rank_prime = rank(fam.ctx(), prime);
  out.dimension = rank_prime;
  out.consistent = (rank_full == rank_prime);
  out.independent = (rank_prime == fam.size());
  return out;
}

namespace {

std::size_t top_variable(const MQuadraticFunction& f) {
  // Highest variable with a nonzero coefficient; arity if none.
  for (std::size_t j = f.arity(); j-- > 0;) {
    for (std::size_t i = 0; i <= j; ++i) {
      if (f.b(i, j) != 0) return j;
    }
    if (!is_zero(f.v(j))) return j;
  }
  return f.arity();
}

// RREF of the coefficient stack, rebuilt as functions. Returns true when a
// row reduces to a nonzero constant (inconsistent family).
bool reduce_rows(const MFamily& fam, std::vector<MQuadraticFunction>& rows) {
  rows.clear();
  if (fam.empty()) return false;
  FpMatrix stack;
  for (const auto& f : fam.functions()) stack.append_row(f.vm_vector());
  RrefResult red = rref(fam.ctx(), stack);
  const std::size_t const_col = stack.cols() - 1;
  for (std::size_t i = 0; i < red.rank; ++i) {
    if (red.pivot_cols[i] == const_col) return true;
    rows.push_back(MQuadraticFunction::from_vm(
        fam.ctx(), fam.shared_matrix(), fam.arity(), red.rref.row(i)));
  }
  return false;
}

}  // namespace

StandardRep standard_representation(const MFamily& fam) {
  std::vector<MQuadraticFunction> rows;
  if (reduce_rows(fam, rows)) {
    throw InconsistentFamily("standard_representation: inconsistent family");
  }
  StandardRep out{MFamily(fam.ctx(), fam.shared_matrix(), fam.arity()),
                  std::vector<std::size_t>(fam.arity(), 0), 0};
  for (auto& r : rows) {
    const std::size_t top = top_variable(r);
    if (top >= fam.arity()) {
      throw InconsistentFamily("standard_representation: constant row");
    }
    ++out.dimension_vector[top];
    out.family.push_back(std::move(r));
  }
  out.total_codim = out.family.size();
  return out;
}

VarietyScanner::VarietyScanner(const MFamily& fam)
    : ctx_(fam.ctx()),
      a_(fam.shared_matrix()),
      arity_(fam.arity()),
      dim_(fam.block_dim()) {
  std::vector<MQuadraticFunction> rows;
  inconsistent_ = reduce_rows(fam, rows);
  stages_.resize(arity_);
  if (inconsistent_) return;
  for (auto& r : rows) {
    const std::size_t top = top_variable(r);
    if (top >= arity_) {
      inconsistent_ = true;  // constant nonzero row
      return;
    }
    stages_[top].push_back(StageRow{std::move(r), top});
  }
}

std::size_t VarietyScanner::block_count() const noexcept {
  return dim_ == 0 ? 1 : ctx_.p();
}

std::uint64_t VarietyScanner::recurse(std::size_t stage,
                                      std::vector<FpVec>& prefix,
                                      std::vector<FpVec>& prefix_a,
                                      const TupleVisitor& visit,
                                      std::uint64_t& work,
                                      std::uint64_t budget,
                                      int pinned_first) const {
  if (++work > budget) {
    throw BudgetExceeded("enumerate_variety: fiber budget exhausted");
  }
  if (stage == arity_) {
    if (visit) visit(prefix);
    return 1;
  }

  // Conditions on n_stage with the prefix substituted: at most one
  // quadratic row (RREF pivots are distinct), the rest affine-linear.
  fp_t alpha = 0;
  FpVec qw(dim_, 0);
  fp_t qc = 0;
  bool have_quad = false;
  std::vector<FpVec> lin_rows;
  FpVec lin_rhs;
  for (const StageRow& row : stages_[stage]) {
    const MQuadraticFunction& f = row.fn;
    fp_t a = f.b(stage, stage);
    FpVec w = f.v(stage);
    for (std::size_t j = 0; j < stage; ++j) {
      fp_t cross = f.b(j, stage);
      if (cross == 0) continue;
      for (std::size_t c = 0; c < dim_; ++c) {
        w[c] = ctx_.add(w[c], ctx_.mul(cross, prefix_a[j][c]));
      }
    }
    fp_t c = f.u();
    for (std::size_t j = 0; j < stage; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        fp_t coef = f.b(i, j);
        if (coef != 0) {
          c = ctx_.add(c, ctx_.mul(coef, dot(ctx_, prefix_a[i], prefix[j])));
        }
      }
      c = ctx_.add(c, dot(ctx_, f.v(j), prefix[j]));
    }
    if (a != 0) {
      if (have_quad) throw Error("variety scan: two quadratic stage rows");
      have_quad = true;
      alpha = a;
      qw = std::move(w);
      qc = c;
    } else {
      lin_rows.push_back(std::move(w));
      lin_rhs.push_back(ctx_.neg(c));
    }
  }
  if (stage == 0 && pinned_first >= 0 && dim_ > 0) {
    FpVec pin(dim_, 0);
    pin[0] = 1;
    lin_rows.push_back(std::move(pin));
    lin_rhs.push_back(fp_t(pinned_first));
  }

  std::uint64_t total = 0;
  quadratic_affine_scan(
      ctx_, *a_, alpha, qw, qc, lin_rows, lin_rhs, [&](const FpVec& n) {
        prefix.push_back(n);
        prefix_a.push_back(row_times_matrix(ctx_, n, *a_));
        total += recurse(stage + 1, prefix, prefix_a, visit, work, budget,
                         pinned_first);
        prefix.pop_back();
        prefix_a.pop_back();
      });
  return total;
}

std::uint64_t VarietyScanner::scan_block(std::size_t block,
                                         const TupleVisitor& visit,
                                         std::uint64_t* work_budget) const {
  if (inconsistent_) return 0;
  std::vector<FpVec> prefix, prefix_a;
  prefix.reserve(arity_);
  prefix_a.reserve(arity_);
  std::uint64_t work = 0;
  std::uint64_t budget = work_budget ? *work_budget : UINT64_MAX;
  std::uint64_t count = recurse(0, prefix, prefix_a, visit, work, budget,
                                static_cast<int>(block));
  if (work_budget) *work_budget = budget - work;
  return count;
}

std::uint64_t VarietyScanner::count(const VarietyOptions& opt) const {
  if (inconsistent_) return 0;
  const std::size_t nblocks = block_count();
  std::vector<std::uint64_t> partial(nblocks, 0);
  std::atomic<std::uint64_t> used{0};
  parallel_blocks(nblocks, opt.threads, [&](std::size_t b) {
    if (used.load() > opt.budget) {
      throw BudgetExceeded("enumerate_variety: budget exhausted");
    }
    std::uint64_t local = opt.budget;
    const std::uint64_t before = local;
    partial[b] = scan_block(b, nullptr, &local);
    used.fetch_add(before - local);
  });
  if (used.load() > opt.budget) {
    throw BudgetExceeded("enumerate_variety: budget exhausted");
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : partial) total += c;
  return total;
}

std::uint64_t VarietyScanner::scan(const TupleVisitor& visit,
                                   const VarietyOptions& opt) const {
  if (inconsistent_) return 0;
  std::uint64_t budget = opt.budget;
  std::uint64_t total = 0;
  for (std::size_t b = 0; b < block_count(); ++b) {
    total += scan_block(b, visit, &budget);
  }
  return total;
}

std::uint64_t enumerate_variety(const MFamily& fam, const VarietyOptions& opt,
                                const TupleVisitor& visit) {
  VarietyScanner scanner(fam);
  if (visit) return scanner.scan(visit, opt);
  return scanner.count(opt);
}

std::vector<std::vector<FpVec>> variety_points(const MFamily& fam,
                                               const VarietyOptions& opt) {
  std::vector<std::vector<FpVec>> out;
  enumerate_variety(fam, opt,
                    [&](const std::vector<FpVec>& t) { out.push_back(t); });
  std::sort(out.begin(), out.end());
  return out;
}

IDecomposition project_decompose(const MFamily& fam,
                                 const std::vector<std::size_t>& vars) {
  if (vars.empty() || vars.size() >= fam.arity()) {
    throw Error("project_decompose: I must be a proper non-empty subset");
  }
  std::vector<bool> in_i(fam.arity(), false);
  for (std::size_t v : vars) {
    if (v >= fam.arity()) throw Error("project_decompose: variable index");
    in_i[v] = true;
  }

  const std::size_t d = fam.block_dim();
  const auto slots = vm_slots(fam.arity(), d);
  // Columns touching a complement variable go leftmost, so RREF rows with
  // a zero prefix span exactly the part of span(fam) independent of them.
  std::vector<std::size_t> touching, inner;
  for (std::size_t c = 0; c < slots.size(); ++c) {
    const Slot& s = slots[c];
    bool touches = false;
    if (s.kind == Slot::kQuad) touches = !in_i[s.i] || !in_i[s.j];
    if (s.kind == Slot::kLin) touches = !in_i[s.i];
    (touches ? touching : inner).push_back(c);
  }
  std::vector<std::size_t> perm = touching;
  perm.insert(perm.end(), inner.begin(), inner.end());

  FpMatrix stack;
  for (const auto& f : fam.functions()) {
    FpVec vm = f.vm_vector();
    FpVec permuted(vm.size());
    for (std::size_t c = 0; c < vm.size(); ++c) permuted[c] = vm[perm[c]];
    stack.append_row(permuted);
  }
  if (stack.rows() == 0) {
    IDecomposition out{vars, MFamily(fam.ctx(), fam.shared_matrix(), vars.size()),
                       MFamily(fam.ctx(), fam.shared_matrix(), fam.arity())};
    return out;
  }
  RrefResult red = rref(fam.ctx(), stack);

  IDecomposition out{vars, MFamily(fam.ctx(), fam.shared_matrix(), vars.size()),
                     MFamily(fam.ctx(), fam.shared_matrix(), fam.arity())};

  // Selection map reindexing the I variables to 0..|I|-1.
  std::vector<FpVec> select(vars.size(), FpVec(fam.arity(), 0));
  for (std::size_t m = 0; m < vars.size(); ++m) select[m][vars[m]] = 1;
  std::vector<FpVec> no_shift(fam.arity(), FpVec(d, 0));

  for (std::size_t rrow = 0; rrow < red.rank; ++rrow) {
    FpVec permuted = red.rref.row(rrow);
    bool depends_on_complement = false;
    for (std::size_t c = 0; c < touching.size(); ++c) {
      if (permuted[c] != 0) {
        depends_on_complement = true;
        break;
      }
    }
    FpVec vm(permuted.size());
    for (std::size_t c = 0; c < permuted.size(); ++c) {
      vm[perm[c]] = permuted[c];
    }
    MQuadraticFunction fn = MQuadraticFunction::from_vm(
        fam.ctx(), fam.shared_matrix(), fam.arity(), vm);
    if (depends_on_complement) {
      out.complement.push_back(std::move(fn));
    } else {
      if (top_variable(fn) >= fam.arity() && fn.u() != 0) {
        throw InconsistentFamily("project_decompose: inconsistent family");
      }
      out.projection.push_back(fn.compose(select, no_shift));
    }
  }
  return out;
}

MFamily fiber_family(const MFamily& complement,
                     const std::vector<std::size_t>& vars,
                     const std::vector<FpVec>& fixed) {
  if (vars.size() != fixed.size()) {
    throw DimensionMismatch("fiber_family: |I| values required");
  }
  std::vector<bool> in_i(complement.arity(), false);
  std::vector<FpVec> shift(complement.arity(),
                           FpVec(complement.block_dim(), 0));
  for (std::size_t m = 0; m < vars.size(); ++m) {
    in_i[vars[m]] = true;
    shift[vars[m]] = fixed[m];
  }
  std::vector<std::size_t> rest;
  for (std::size_t v = 0; v < complement.arity(); ++v) {
    if (!in_i[v]) rest.push_back(v);
  }
  std::vector<FpVec> coeffs(rest.size(), FpVec(complement.arity(), 0));
  for (std::size_t m = 0; m < rest.size(); ++m) coeffs[m][rest[m]] = 1;

  MFamily out(complement.ctx(), complement.shared_matrix(), rest.size());
  for (const auto& f : complement.functions()) {
    out.push_back(f.compose(coeffs, shift));
  }
  return out;
}

// ---- Omega builders -------------------------------------------------------

namespace {

void require_omega_inputs(const QuadraticForm& m, const Configuration& x,
                          const std::vector<std::size_t>& index_set) {
  if (!find_sphere(m, x)) {
    throw NotSphericalError("omega builder: X is not M-spherical");
  }
  std::vector<FpVec> rows;
  for (std::size_t j = 1; j < x.size(); ++j) {
    rows.push_back(sub(x.ctx, x.points[j], x.points[0]));
  }
  const std::size_t k =
      rows.empty() ? 0 : rank(x.ctx, FpMatrix::from_rows(rows));
  std::vector<FpVec> sel;
  for (std::size_t idx : index_set) {
    if (idx >= x.size()) throw NotGenerating("omega builder: index range");
    if (idx != index_set.front()) {
      sel.push_back(sub(x.ctx, x.points[idx], x.points[index_set.front()]));
    }
  }
  const std::size_t ki = sel.empty() ? 0 : rank(x.ctx, FpMatrix::from_rows(sel));
  if (index_set.size() != k + 1 || ki != k) {
    throw NotGenerating("omega builder: I is not a generating set");
  }
}

}  // namespace

MFamily omega_index_family(const QuadraticForm& m, fp_t r,
                           const Configuration& x,
                           const std::vector<std::size_t>& index_set) {
  require_omega_inputs(m, x, index_set);
  const FieldContext& ctx = m.ctx();
  auto a = std::make_shared<const FpMatrix>(m.matrix());
  const std::size_t kk = index_set.size();
  MFamily fam(ctx, a, kk);
  for (std::size_t pos = 0; pos < kk; ++pos) {
    MQuadraticFunction f = MQuadraticFunction::zero(ctx, a, kk);
    f.set_b(pos, pos, 1);
    f.set_u(ctx.neg(r % ctx.p()));
    fam.push_back(std::move(f));
  }
  for (std::size_t pa = 0; pa < kk; ++pa) {
    for (std::size_t pb = pa + 1; pb < kk; ++pb) {
      MQuadraticFunction f = MQuadraticFunction::zero(ctx, a, kk);
      f.set_b(pa, pa, 1);
      f.set_b(pb, pb, 1);
      f.set_b(pa, pb, ctx.neg(2 % ctx.p()));
      FpVec diff = sub(ctx, x.points[index_set[pa]], x.points[index_set[pb]]);
      f.set_u(ctx.neg(m(diff)));
      fam.push_back(std::move(f));
    }
  }
  return fam;
}

namespace {

MFamily dedup_family(MFamily fam) {
  MFamily out(fam.ctx(), fam.shared_matrix(), fam.arity());
  std::set<FpVec> seen;
  for (const auto& f : fam.functions()) {
    if (seen.insert(f.vm_vector()).second) out.push_back(f);
  }
  return out;
}

}  // namespace

MFamily omega_product_family(const QuadraticForm& m, fp_t r,
                             const Configuration& x,
                             const std::vector<std::size_t>& index_set,
                             std::size_t i) {
  const auto it = std::find(index_set.begin(), index_set.end(), i);
  if (it == index_set.end()) {
    throw NotGenerating("omega_product_family: i must lie in I");
  }
  MFamily base = omega_index_family(m, r, x, index_set);
  const std::size_t kk = index_set.size();
  const std::size_t ipos = std::size_t(it - index_set.begin());
  const std::size_t newk = 2 * kk - 1;
  const std::size_t d = base.block_dim();
  const FieldContext& ctx = base.ctx();

  auto remap = [&](bool plus) {
    // Position of old variable a in the product tuple.
    std::vector<FpVec> coeffs(newk, FpVec(kk, 0));
    std::size_t next = 1;
    std::vector<std::size_t> target(kk);
    for (std::size_t a = 0; a < kk; ++a) {
      if (a == ipos) {
        target[a] = 0;
      } else {
        target[a] = next++;
      }
    }
    for (std::size_t a = 0; a < kk; ++a) {
      std::size_t t = target[a];
      if (a != ipos && !plus) t += kk - 1;
      coeffs[t][a] = 1;
    }
    return coeffs;
  };
  std::vector<FpVec> no_shift(kk, FpVec(d, 0));

  MFamily fam(ctx, base.shared_matrix(), newk);
  for (const auto& f : base.functions()) {
    fam.push_back(f.compose(remap(true), no_shift));
  }
  for (const auto& f : base.functions()) {
    fam.push_back(f.compose(remap(false), no_shift));
  }
  return dedup_family(std::move(fam));
}

MFamily omega_gowers_family(const QuadraticForm& m, fp_t r,
                            const Configuration& x,
                            const std::vector<std::size_t>& index_set,
                            std::size_t i0, std::size_t t) {
  const auto it = std::find(index_set.begin(), index_set.end(), i0);
  if (it == index_set.end()) {
    throw NotGenerating("omega_gowers_family: i0 must lie in I");
  }
  if (t == 0) throw Error("omega_gowers_family: t must be positive");
  MFamily base = omega_index_family(m, r, x, index_set);
  const std::size_t kk = index_set.size();
  const std::size_t ipos = std::size_t(it - index_set.begin());
  const std::size_t newk = kk + t;
  const std::size_t d = base.block_dim();
  const FieldContext& ctx = base.ctx();
  std::vector<FpVec> no_shift(kk, FpVec(d, 0));

  MFamily fam(ctx, base.shared_matrix(), newk);
  for (std::uint32_t eps = 0; eps < (1u << t); ++eps) {
    std::vector<FpVec> coeffs(newk, FpVec(kk, 0));
    for (std::size_t a = 0; a < kk; ++a) coeffs[a][a] = 1;
    for (std::size_t mbit = 0; mbit < t; ++mbit) {
      if (eps & (1u << mbit)) coeffs[kk + mbit][ipos] = 1;
    }
    for (const auto& f : base.functions()) {
      fam.push_back(f.compose(coeffs, no_shift));
    }
  }
  return dedup_family(std::move(fam));
}

std::vector<std::vector<FpVec>> omega_tuples(const QuadraticForm& m, fp_t r,
                                             const Configuration& x,
                                             const GeneratingData& g,
                                             const VarietyOptions& opt) {
  MFamily fam = omega_index_family(m, r, x, g.index_set);
  std::vector<std::vector<FpVec>> out;
  enumerate_variety(fam, opt, [&](const std::vector<FpVec>& tuple) {
    out.push_back(apply_generating_tuple(x.ctx, g, tuple));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<FpVec>> omega_product_tuples(
    const QuadraticForm& m, fp_t r, const Configuration& x,
    const GeneratingData& g, std::size_t i, const VarietyOptions& opt) {
  MFamily fam = omega_product_family(m, r, x, g.index_set, i);
  const std::size_t kk = g.index_set.size();
  const auto it = std::find(g.index_set.begin(), g.index_set.end(), i);
  const std::size_t ipos = std::size_t(it - g.index_set.begin());
  std::vector<std::vector<FpVec>> out;
  enumerate_variety(fam, opt, [&](const std::vector<FpVec>& tuple) {
    // Rebuild the two I-tuples sharing the i coordinate.
    std::vector<FpVec> plus(kk), minus(kk);
    std::size_t next = 1;
    for (std::size_t a = 0; a < kk; ++a) {
      if (a == ipos) {
        plus[a] = tuple[0];
        minus[a] = tuple[0];
      } else {
        plus[a] = tuple[next];
        minus[a] = tuple[next + kk - 1];
        ++next;
      }
    }
    std::vector<FpVec> jp = apply_generating_tuple(x.ctx, g, plus);
    std::vector<FpVec> jm = apply_generating_tuple(x.ctx, g, minus);
    std::vector<FpVec> row;
    row.reserve(2 * jp.size() - 1);
    row.push_back(jp[i]);
    for (std::size_t j = 0; j < jp.size(); ++j) {
      if (j != i) row.push_back(jp[j]);
    }
    for (std::size_t j = 0; j < jm.size(); ++j) {
      if (j != i) row.push_back(jm[j]);
    }
    out.push_back(std::move(row));
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fpgeom
