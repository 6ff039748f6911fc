#include "fpgeom/ramsey.hpp"

#include <algorithm>
#include <cmath>

#include "fpgeom/parallel.hpp"
#include "fpgeom/rng.hpp"

namespace fpgeom {

OmegaTable::OmegaTable(const QuadraticForm& m, fp_t r, const Configuration& x,
                       const VarietyOptions& opt)
    : grid_(std::make_shared<SphereGrid>(m, r)),
      analysis_(analyze_configuration(x)),
      tuple_len_(x.size()) {
  const GeneratingData& g = canonical_generating_set(analysis_);
  MFamily fam = omega_index_family(m, r, x, g.index_set);
  VarietyScanner scanner(fam);
  const std::size_t nblocks = scanner.block_count();
  std::vector<std::vector<std::uint32_t>> blocks(nblocks);
  parallel_blocks(nblocks, opt.threads, [&](std::size_t b) {
    std::uint64_t budget = opt.budget;
    scanner.scan_block(
        b,
        [&](const std::vector<FpVec>& tuple) {
          std::vector<FpVec> full = apply_generating_tuple(x.ctx, g, tuple);
          for (const auto& pt : full) {
            auto idx = grid_->index_of(pt);
            if (!idx) throw Error("OmegaTable: generated point off sphere");
            blocks[b].push_back(std::uint32_t(*idx));
          }
        },
        &budget);
  });
  std::uint64_t total = 0;
  for (const auto& blk : blocks) total += blk.size();
  flat_.reserve(total);
  for (const auto& blk : blocks) {
    flat_.insert(flat_.end(), blk.begin(), blk.end());
  }
}

namespace {

void check_functions(const OmegaTable& table,
                     const std::vector<ComplexGrid>& fs) {
  if (fs.size() != table.tuple_len()) {
    throw DimensionMismatch("one function per configuration point required");
  }
  for (const auto& f : fs) {
    if (f.grid().size() != table.grid().size() ||
        f.grid().radius() != table.grid().radius()) {
      throw DimensionMismatch("functions must live on the same sphere");
    }
  }
}

}  // namespace

std::complex<double> spherical_average(const OmegaTable& table,
                                       const std::vector<ComplexGrid>& fs,
                                       const AverageOptions& opt) {
  check_functions(table, fs);
  const std::uint64_t n = table.size();
  if (n == 0) throw Error("spherical_average: Omega is empty");
  auto ranges = block_ranges(n);
  std::vector<ComplexSum> partial(ranges.size());
  parallel_blocks(ranges.size(), opt.threads, [&](std::size_t b) {
    for (std::uint64_t t = ranges[b].first; t < ranges[b].second; ++t) {
      std::complex<double> prod = 1.0;
      for (std::size_t j = 0; j < table.tuple_len(); ++j) {
        prod *= fs[j].at(table.at(t, j));
      }
      partial[b].add(prod);
    }
  });
  ComplexSum sum;
  for (auto& blk : partial) sum.add(blk.value());
  return sum.value() / double(n);
}

std::complex<double> spherical_average(const QuadraticForm& m, fp_t r,
                                       const Configuration& x,
                                       const std::vector<ComplexGrid>& fs,
                                       const AverageOptions& opt) {
  OmegaTable table(m, r, x, VarietyOptions{opt.budget, opt.threads});
  return spherical_average(table, fs, opt);
}

std::complex<double> relative_average(const QuadraticForm& m, fp_t r,
                                      const Configuration& x, std::size_t i,
                                      const std::vector<ComplexGrid>& fs,
                                      const AverageOptions& opt) {
  OmegaTable table(m, r, x, VarietyOptions{opt.budget, opt.threads});
  check_functions(table, fs);
  if (i >= table.tuple_len()) throw std::out_of_range("relative_average: i");
  const std::size_t len = table.tuple_len();

  // Route 1: group Omega by the i-th coordinate; the product average is
  // sum_x f_i(x) |S(x)|^2 over sum_x |fiber(x)|^2 for the fiber sums S.
  const std::size_t sphere = table.grid().size();
  std::vector<std::complex<double>> fiber_sum(sphere, 0.0);
  std::vector<std::uint64_t> fiber_count(sphere, 0);
  for (std::uint64_t t = 0; t < table.size(); ++t) {
    std::complex<double> prod = 1.0;
    for (std::size_t j = 0; j < len; ++j) {
      if (j != i) prod *= fs[j].at(table.at(t, j));
    }
    const std::uint32_t xi = table.at(t, i);
    fiber_sum[xi] += prod;
    ++fiber_count[xi];
  }
  ComplexSum grouped_num;
  std::uint64_t grouped_den = 0;
  for (std::size_t v = 0; v < sphere; ++v) {
    if (fiber_count[v] == 0) continue;
    grouped_num.add(fs[i].at(v) * std::norm(fiber_sum[v]));
    grouped_den += fiber_count[v] * fiber_count[v];
  }
  if (grouped_den == 0) throw Error("relative_average: Omega is empty");
  const std::complex<double> grouped = grouped_num.value() / double(grouped_den);

  // Route 2: direct enumeration of Omega x_i Omega.
  const ConfigurationAnalysis& analysis = table.analysis();
  const GeneratingData& g = generating_set_containing(analysis, i);
  MFamily fam = omega_product_family(m, r, x, g.index_set, i);
  VarietyScanner scanner(fam);
  const std::size_t kk = g.index_set.size();
  const std::size_t ipos =
      std::size_t(std::find(g.index_set.begin(), g.index_set.end(), i) -
                  g.index_set.begin());
  const std::size_t nblocks = scanner.block_count();
  std::vector<ComplexSum> partial(nblocks);
  std::vector<std::uint64_t> partial_count(nblocks, 0);
  parallel_blocks(nblocks, opt.threads, [&](std::size_t b) {
    std::uint64_t budget = opt.budget;
    std::vector<FpVec> plus(kk), minus(kk);
    scanner.scan_block(
        b,
        [&](const std::vector<FpVec>& tuple) {
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
          std::complex<double> prod = fs[i].at(*table.grid().index_of(jp[i]));
          for (std::size_t j = 0; j < len; ++j) {
            if (j == i) continue;
            prod *= fs[j].at(*table.grid().index_of(jp[j]));
            prod *= std::conj(fs[j].at(*table.grid().index_of(jm[j])));
          }
          partial[b].add(prod);
          ++partial_count[b];
        },
        &budget);
  });
  ComplexSum direct_sum;
  std::uint64_t direct_count = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    direct_sum.add(partial[b].value());
    direct_count += partial_count[b];
  }
  if (direct_count != grouped_den) {
    throw Error("relative_average: product count mismatch between routes");
  }
  const std::complex<double> direct = direct_sum.value() / double(direct_count);
  if (std::abs(direct - grouped) > 1e-9) {
    throw Error("relative_average: dual routes disagree");
  }
  return direct;
}

VonNeumannReport von_neumann_report(const OmegaTable& table,
                                    const std::vector<ComplexGrid>& fs,
                                    std::size_t norm_order,
                                    double slack_budget,
                                    const AverageOptions& opt) {
  check_functions(table, fs);
  for (const auto& f : fs) {
    if (f.max_abs() > 1.0 + 1e-9) {
      throw UnboundedInput("von_neumann_report: |f| must be bounded by 1");
    }
  }
  VonNeumannReport out;
  out.norm_order = norm_order;
  out.slack_budget = slack_budget;
  out.lhs = std::abs(spherical_average(table, fs, opt));
  out.u_norm =
      gowers_norm(fs[0], norm_order, GowersOptions{opt.budget, opt.threads})
          .norm;
  out.slack = out.lhs - out.u_norm;
  out.pass = out.slack <= slack_budget;
  const auto& an = table.analysis();
  out.below_threshold =
      (long long)table.grid().dim() <
      dimension_threshold((long long)an.k, (long long)an.s);
  return out;
}

ExperimentReport density_experiment(const OmegaTable& table,
                                    const DensitySpec& spec,
                                    const AverageOptions& opt) {
  ExperimentReport rep;
  const auto& an = table.analysis();
  rep.p = table.grid().ctx().p();
  rep.d = table.grid().dim();
  rep.k = an.k;
  rep.s = an.s;
  rep.config_size = table.tuple_len();
  rep.seed = spec.seed;
  rep.sphere_size = table.grid().size();
  rep.omega_count = table.size();
  rep.explicit_set = spec.explicit_set.has_value();
  rep.epsilon = spec.epsilon;

  const std::size_t len = table.tuple_len();
  auto count_members = [&](const std::vector<char>& member) {
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < table.size(); ++t) {
      bool all = true;
      for (std::size_t j = 0; j < len && all; ++j) {
        all = member[table.at(t, j)] != 0;
      }
      count += all ? 1 : 0;
    }
    return count;
  };

  if (spec.explicit_set) {
    rep.trials = 1;
    std::vector<char> member(table.grid().size(), 0);
    for (const auto& pt : *spec.explicit_set) {
      auto idx = table.grid().index_of(pt);
      if (!idx) throw NotOnSphere("density_experiment: E leaves the sphere");
      member[*idx] = 1;
    }
    rep.counts.push_back(count_members(member));
  } else {
    rep.trials = spec.trials;
    rep.counts.assign(spec.trials, 0);
    CounterRng rng(spec.seed, 0);
    auto trial_ranges = block_ranges(spec.trials, spec.trials);
    parallel_blocks(trial_ranges.size(), opt.threads, [&](std::size_t b) {
      for (std::size_t t = trial_ranges[b].first; t < trial_ranges[b].second;
           ++t) {
        CounterRng trial_rng = rng.split(t);
        std::vector<char> member(table.grid().size(), 0);
        for (std::size_t v = 0; v < table.grid().size(); ++v) {
          member[v] = trial_rng.bernoulli(v, spec.epsilon) ? 1 : 0;
        }
        rep.counts[t] = count_members(member);
      }
    });
  }

  for (std::uint64_t c : rep.counts) {
    rep.densities.push_back(double(c) / double(rep.omega_count));
  }
  double mean = 0;
  for (double x : rep.densities) mean += x;
  mean /= double(rep.densities.size());
  rep.mean_density = mean;
  if (rep.densities.size() > 1) {
    double var = 0;
    for (double x : rep.densities) var += (x - mean) * (x - mean);
    var /= double(rep.densities.size() - 1);
    rep.std_error = std::sqrt(var / double(rep.densities.size()));
  }
  rep.reference_density = std::pow(spec.epsilon, double(len));
  rep.slack = std::abs(rep.mean_density - rep.reference_density);
  rep.slack_allowance = 3.0 * rep.std_error;
  rep.heuristic_applicable = !spec.explicit_set && rep.trials > 1;
  rep.heuristic_pass =
      rep.heuristic_applicable && rep.slack <= rep.slack_allowance;

  const long long kk = (long long)an.k, dd = (long long)rep.d;
  rep.sphere_exponent = (kk + 1) * dd - (kk + 1) * (kk + 2) / 2;
  rep.ambient_exponent = (kk + 1) * dd - (kk + 1) * kk / 2;
  double fact = 1;
  for (std::size_t i = 2; i <= len; ++i) fact *= double(i);
  rep.unordered_estimate =
      rep.counts.empty() ? 0 : double(rep.counts.back()) / fact;
  rep.d0 = dimension_threshold((long long)an.k, (long long)an.s);
  rep.below_threshold = dd < rep.d0;
  if (rep.below_threshold) {
    rep.disclaimer =
        "desk-scale run: d is below the d0 threshold, results are "
        "consistency checks, not theorem verification";
  }
  return rep;
}

long long dimension_threshold(long long k, long long s) {
  if (k < 0 || s < 1) {
    throw Error("dimension_threshold: need k >= 0 and s >= 1");
  }
  const long long a = (2 * s + 12) * (15 * s + 423);
  const long long b = 4 * k * k + 12 * k + 7;
  return std::max(a, b);
}

}  // namespace fpgeom
