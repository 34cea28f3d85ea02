#pragma once

// Contingency tables, chi-square independence tests, distribution distances
// and back-door adjustment over a discrete confounder.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "trustrate/error.hpp"

namespace trustrate::stats {

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  /// counts[row][col]
  std::vector<std::vector<std::uint64_t>> counts;

  static ContingencyTable zeros(std::vector<std::string> rows, std::vector<std::string> cols) {
    ContingencyTable t{std::move(rows), std::move(cols), {}};
    t.counts.assign(t.row_labels.size(), std::vector<std::uint64_t>(t.col_labels.size(), 0));
    return t;
  }

  std::size_t row_index(const std::string& label) const { return index_of(row_labels, label); }
  std::size_t col_index(const std::string& label) const { return index_of(col_labels, label); }

  void add(const std::string& row, const std::string& col, std::uint64_t n = 1) {
    counts[row_index(row)][col_index(col)] += n;
  }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& r : counts) n = std::accumulate(r.begin(), r.end(), n);
    return n;
  }

  std::uint64_t row_total(std::size_t r) const {
    return std::accumulate(counts[r].begin(), counts[r].end(), std::uint64_t{0});
  }

  std::uint64_t col_total(std::size_t c) const {
    std::uint64_t n = 0;
    for (const auto& r : counts) n += r[c];
    return n;
  }

  /// Copy without all-zero rows and columns.
  ContingencyTable pruned() const {
    std::vector<std::size_t> rows, cols;
    for (std::size_t r = 0; r < row_labels.size(); ++r)
      if (row_total(r) > 0) rows.push_back(r);
    for (std::size_t c = 0; c < col_labels.size(); ++c)
      if (col_total(c) > 0) cols.push_back(c);
    ContingencyTable out;
    for (auto r : rows) out.row_labels.push_back(row_labels[r]);
    for (auto c : cols) out.col_labels.push_back(col_labels[c]);
    for (auto r : rows) {
      std::vector<std::uint64_t> row;
      for (auto c : cols) row.push_back(counts[r][c]);
      out.counts.push_back(std::move(row));
    }
    return out;
  }

  /// Row-conditional distribution over columns; empty row gives empty vector.
  std::vector<double> row_distribution(std::size_t r) const {
    const double n = static_cast<double>(row_total(r));
    if (n == 0) return {};
    std::vector<double> p;
    for (auto v : counts[r]) p.push_back(static_cast<double>(v) / n);
    return p;
  }

  bool operator==(const ContingencyTable&) const = default;

 private:
  static std::size_t index_of(const std::vector<std::string>& labels, const std::string& l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw InvalidArgument("unknown table label '" + l + "'");
    return static_cast<std::size_t>(it - labels.begin());
  }
};

struct TestResult {
  double statistic = 0.0;
  int degrees_of_freedom = 1;
  double p_value = 1.0;
  double alpha = 0.05;
  bool significant = false;
  /// Smallest expected cell count; below 5 the asymptotic p-value is rough.
  double min_expected = 0.0;
  bool low_expected_warning = false;

  bool operator==(const TestResult&) const = default;
};

/// Q(s, x) = Gamma(s, x) / Gamma(s). Series for x < s + 1, Lentz continued
/// fraction otherwise.
inline double regularized_gamma_upper(double s, double x) {
  if (!(s > 0.0)) throw InvalidArgument("regularized gamma requires s > 0");
  if (!(x >= 0.0)) throw InvalidArgument("regularized gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double log_prefactor = -x + s * std::log(x) - std::lgamma(s);

  if (x < s + 1.0) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * eps * 0.25) break;
    }
    const double lower = sum * std::exp(log_prefactor);
    return std::clamp(1.0 - lower, 0.0, 1.0);
  }

  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps * 0.25) break;
  }
  return std::clamp(std::exp(log_prefactor) * h, 0.0, 1.0);
}

/// Upper tail of the chi-square distribution.
inline double chi_square_sf(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw InvalidArgument("chi-square needs df >= 1");
  return regularized_gamma_upper(0.5 * degrees_of_freedom, 0.5 * statistic);
}

/// Pearson chi-square test of independence. All-zero rows and columns are
/// dropped first; fewer than two remaining rows or columns is degenerate.
inline TestResult chi_square_independence(const ContingencyTable& table, double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  const auto t = table.pruned();
  if (t.row_labels.size() < 2 || t.col_labels.size() < 2)
    throw DegenerateTable("table is " + std::to_string(t.row_labels.size()) + "x" +
                          std::to_string(t.col_labels.size()) +
                          " after dropping empty rows and columns");
  const double n = static_cast<double>(t.total());
  std::vector<double> rows, cols;
  for (std::size_t r = 0; r < t.row_labels.size(); ++r) rows.push_back(double(t.row_total(r)));
  for (std::size_t c = 0; c < t.col_labels.size(); ++c) cols.push_back(double(t.col_total(c)));

  TestResult res;
  res.alpha = alpha;
  res.min_expected = std::numeric_limits<double>::infinity();
  double stat = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double expected = rows[r] * cols[c] / n;
      const double diff = static_cast<double>(t.counts[r][c]) - expected;
      stat += diff * diff / expected;
      res.min_expected = std::min(res.min_expected, expected);
    }
  }
  res.statistic = stat;
  res.degrees_of_freedom = static_cast<int>((rows.size() - 1) * (cols.size() - 1));
  res.p_value = chi_square_sf(stat, res.degrees_of_freedom);
  res.significant = res.p_value < alpha;
  res.low_expected_warning = res.min_expected < 5.0;
  return res;
}

namespace detail {
inline void check_distribution(const std::vector<double>& p, const char* name) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidArgument(std::string(name) + " has a negative entry");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw InvalidArgument(std::string(name) + " does not sum to 1");
}
}  // namespace detail

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size() || p.empty())
    throw InvalidArgument("total variation needs distributions over the same support");
  detail::check_distribution(p, "p");
  detail::check_distribution(q, "q");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return std::min(1.0, 0.5 * s);
}

/// Largest total variation over all pairs of distributions.
inline double max_pairwise_tv(const std::vector<std::vector<double>>& dists) {
  double m = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (std::size_t j = i + 1; j < dists.size(); ++j)
      m = std::max(m, total_variation(dists[i], dists[j]));
  return m;
}

inline constexpr double kDefaultPseudocount = 0.5;

/// Additive smoothing. A zero pseudocount is only allowed without empty cells.
inline std::vector<double> smooth(const std::vector<double>& counts,
                                  double pseudocount = kDefaultPseudocount) {
  if (counts.empty()) throw InvalidArgument("smoothing an empty count vector");
  if (!(pseudocount >= 0.0)) throw InvalidArgument("pseudocount must be >= 0");
  double total = 0.0;
  bool any_empty = false;
  for (double c : counts) {
    if (!(c >= 0.0)) throw InvalidArgument("negative count");
    total += c;
    any_empty = any_empty || c == 0.0;
  }
  if (total == 0.0) throw InvalidArgument("all counts are zero");
  if (pseudocount == 0.0 && any_empty)
    throw InvalidArgument("zero pseudocount with an empty cell");
  const double denom = total + pseudocount * static_cast<double>(counts.size());
  std::vector<double> p;
  p.reserve(counts.size());
  for (double c : counts) p.push_back((c + pseudocount) / denom);
  return p;
}

/// Joint distribution over (outcome Y, treatment X, confounder Z).
class JointDistribution {
 public:
  JointDistribution() = default;

  /// From raw counts laid out [y][x][z]. Confounder strata with no mass are
  /// dropped; the pseudocount is then added to every remaining cell.
  static JointDistribution from_counts(std::vector<std::string> outcomes,
                                       std::vector<std::string> treatments,
                                       std::vector<std::string> strata,
                                       const std::vector<double>& counts,
                                       double pseudocount = kDefaultPseudocount) {
    const std::size_t ny = outcomes.size(), nx = treatments.size(), nz = strata.size();
    if (ny == 0 || nx == 0 || nz == 0) throw InvalidArgument("empty joint dimension");
    if (counts.size() != ny * nx * nz) throw InvalidArgument("count array shape mismatch");
    if (!(pseudocount >= 0.0)) throw InvalidArgument("pseudocount must be >= 0");
    std::vector<std::size_t> kept;
    for (std::size_t z = 0; z < nz; ++z) {
      double mass = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) {
          const double c = counts[(y * nx + x) * nz + z];
          if (!(c >= 0.0)) throw InvalidArgument("negative count");
          mass += c;
        }
      if (mass > 0.0) kept.push_back(z);
    }
    if (kept.empty()) throw InvalidArgument("all counts are zero");
    JointDistribution j;
    j.outcomes_ = std::move(outcomes);
    j.treatments_ = std::move(treatments);
    for (auto z : kept) j.strata_.push_back(strata[z]);
    j.pseudocount_ = pseudocount;
    const std::size_t kz = kept.size();
    std::vector<double> flat(ny * nx * kz);
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t k = 0; k < kz; ++k)
          flat[(y * nx + x) * kz + k] = counts[(y * nx + x) * nz + kept[k]] + pseudocount;
    double total = 0.0;
    for (double v : flat) total += v;
    for (auto& v : flat) v /= total;
    j.prob_ = std::move(flat);
    return j;
  }

  /// From probabilities laid out [y][x][z], summing to 1 within 1e-12.
  static JointDistribution from_probabilities(std::vector<std::string> outcomes,
                                              std::vector<std::string> treatments,
                                              std::vector<std::string> strata,
                                              std::vector<double> prob) {
    if (prob.size() != outcomes.size() * treatments.size() * strata.size() || prob.empty())
      throw InvalidArgument("probability array shape mismatch");
    double total = 0.0;
    for (double v : prob) {
      if (!(v >= 0.0)) throw InvalidArgument("negative probability");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw InvalidArgument("joint does not sum to 1");
    JointDistribution j;
    j.outcomes_ = std::move(outcomes);
    j.treatments_ = std::move(treatments);
    j.strata_ = std::move(strata);
    j.prob_ = std::move(prob);
    return j;
  }

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<std::string>& treatments() const { return treatments_; }
  const std::vector<std::string>& strata() const { return strata_; }
  double pseudocount() const { return pseudocount_; }

  double at(std::size_t y, std::size_t x, std::size_t z) const {
    return prob_[(y * treatments_.size() + x) * strata_.size() + z];
  }

  double treatment_mass(std::size_t x) const {
    double m = 0.0;
    for (std::size_t y = 0; y < outcomes_.size(); ++y)
      for (std::size_t z = 0; z < strata_.size(); ++z) m += at(y, x, z);
    return m;
  }

  double stratum_mass(std::size_t z) const {
    double m = 0.0;
    for (std::size_t y = 0; y < outcomes_.size(); ++y)
      for (std::size_t x = 0; x < treatments_.size(); ++x) m += at(y, x, z);
    return m;
  }

  double cell_mass(std::size_t x, std::size_t z) const {
    double m = 0.0;
    for (std::size_t y = 0; y < outcomes_.size(); ++y) m += at(y, x, z);
    return m;
  }

 private:
  std::vector<std::string> outcomes_, treatments_, strata_;
  std::vector<double> prob_;
  double pseudocount_ = 0.0;
};

/// Observational P(Y | X = x).
inline std::vector<double> conditional(const JointDistribution& j, std::size_t x) {
  if (x >= j.treatments().size()) throw InvalidArgument("treatment index out of range");
  const double px = j.treatment_mass(x);
  if (px <= 0.0) throw InvalidArgument("treatment '" + j.treatments()[x] + "' has no mass");
  std::vector<double> out(j.outcomes().size(), 0.0);
  for (std::size_t y = 0; y < out.size(); ++y) {
    for (std::size_t z = 0; z < j.strata().size(); ++z) out[y] += j.at(y, x, z);
    out[y] /= px;
  }
  return out;
}

/// P(Y | do(X = x)) = sum_z P(Y | x, z) P(z).
inline std::vector<double> backdoor_adjust(const JointDistribution& j, std::size_t x) {
  if (x >= j.treatments().size()) throw InvalidArgument("treatment index out of range");
  std::vector<double> out(j.outcomes().size(), 0.0);
  for (std::size_t z = 0; z < j.strata().size(); ++z) {
    const double pz = j.stratum_mass(z);
    if (pz <= 0.0) continue;
    const double pxz = j.cell_mass(x, z);
    if (pxz <= 0.0) throw PositivityViolation(j.strata()[z], j.treatments()[x]);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += j.at(y, x, z) / pxz * pz;
  }
  return out;
}

/// max_x TV(P(Y | x), P(Y | do(x))) over treatments with mass.
inline double confounding_gap(const JointDistribution& j) {
  double gap = 0.0;
  for (std::size_t x = 0; x < j.treatments().size(); ++x) {
    if (j.treatment_mass(x) <= 0.0) continue;
    gap = std::max(gap, total_variation(conditional(j, x), backdoor_adjust(j, x)));
  }
  return gap;
}

}  // namespace trustrate::stats
