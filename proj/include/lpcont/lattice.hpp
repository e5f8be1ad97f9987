#pragma once

// Exact integer bookkeeping for the Dirichlet spectrum of [0,pi]^2.
//
// Eigenfunctions are sin(mx) sin(ny), m,n >= 1, with eigenvalue m^2 + n^2.
// Everything here is integer arithmetic; the listing order of modes is
// (eigenvalue, m, n) ascending.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lpcont {

using Int = std::int64_t;

struct LatticeMode {
  Int m = 1;
  Int n = 1;

  constexpr Int eigenvalue() const noexcept { return m * m + n * n; }

  friend constexpr bool operator==(const LatticeMode&, const LatticeMode&) = default;

  /// Listing order: (eigenvalue, m, n).
  friend constexpr std::strong_ordering operator<=>(const LatticeMode& a, const LatticeMode& b) {
    if (auto c = a.eigenvalue() <=> b.eigenvalue(); c != 0) return c;
    if (auto c = a.m <=> b.m; c != 0) return c;
    return a.n <=> b.n;
  }
};

/// Validating constructor; throws std::invalid_argument unless m,n >= 1.
LatticeMode make_mode(Int m, Int n);

/// Finite set of lattice modes, kept in listing order, no duplicates.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::vector<LatticeMode> modes, std::string label);

  const std::vector<LatticeMode>& modes() const noexcept { return modes_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  bool contains(const LatticeMode& mode) const;

  /// Largest eigenvalue in the set (0 for the empty set).
  Int max_eigenvalue() const noexcept;
  /// Largest m or n appearing in the set (0 for the empty set).
  Int max_index() const noexcept;

  auto begin() const noexcept { return modes_.begin(); }
  auto end() const noexcept { return modes_.end(); }

 private:
  std::vector<LatticeMode> modes_;
  std::string label_;
};

struct SplitEntry {
  Int eigenvalue = 0;
  std::vector<LatticeMode> inside;
  std::vector<LatticeMode> outside;
};

/// Distinct eigenvalues represented in a non-splitting index set together
/// with the distances to the neighbouring distinct eigenvalues.
struct SpectrumWindow {
  std::vector<Int> distinct_values_inside;
  std::optional<Int> gap_below;  // absent when the set contains the bottom eigenvalue 2
  Int gap_above = 0;
  std::vector<double> mu_values;  // 1/lambda for each inside value, same order

  Int min_inside() const { return distinct_values_inside.front(); }
  Int max_inside() const { return distinct_values_inside.back(); }
};

/// All (m,n) with 1 <= m,n <= max_index in listing order.
std::vector<LatticeMode> enumerate_modes(Int max_index);

/// Smallest k with k^2 >= lambda - 1: every representation m^2+n^2 = lambda
/// with m,n >= 1 has m,n <= k.
Int exhaustive_index(Int eigenvalue);

/// Number of ordered pairs (m,n), m,n >= 1, with m^2+n^2 = eigenvalue.
/// Rejects max_index too small to be exhaustive.
Int multiplicity(Int eigenvalue, Int max_index);

bool is_eigenvalue(Int value);
/// Smallest eigenvalue strictly greater than value.
Int next_eigenvalue(Int value);
/// Largest eigenvalue strictly smaller than value, if any.
std::optional<Int> previous_eigenvalue(Int value);
/// The first `count` distinct eigenvalues 2, 5, 8, 10, 13, ...
std::vector<Int> distinct_eigenvalues(Int count);

/// F_N = {(m,n) : 0 < m,n <= N}.
IndexSet cutoff_square(Int N);
/// B_N = {(m,n) : m^2 + n^2 <= N^2}.
IndexSet cutoff_ball(Int N);
/// All modes with eigenvalue <= lambda_max; never splits.
IndexSet eigenvalue_window(Int lambda_max);

/// Every eigenvalue with modes both inside and outside F.
std::vector<SplitEntry> splits(const IndexSet& F, Int max_index);

/// Gamma_N: modes of F_N sharing an eigenvalue with some mode outside F_N.
IndexSet bad_region(Int N);

/// Throws SplittingError if F splits; std::invalid_argument if F is empty.
SpectrumWindow spectrum_window(const IndexSet& F, Int max_index);

/// Number of modes (with multiplicity) with eigenvalue <= lambda_max.
Int weyl_count(Int lambda_max);

/// One "m n" line per mode, label in a leading '#' comment.
void write_index_set(std::ostream& os, const IndexSet& F);
IndexSet read_index_set(std::istream& is);

}  // namespace lpcont
