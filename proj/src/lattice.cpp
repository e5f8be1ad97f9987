#include "lpcont/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lpcont/errors.hpp"

namespace lpcont {

namespace {

Int isqrt(Int v) {
  if (v <= 0) return 0;
  Int r = static_cast<Int>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

void require_exhaustive(Int eigenvalue, Int max_index) {
  if (max_index * max_index < eigenvalue - 1) {
    throw std::invalid_argument("max_index " + std::to_string(max_index) +
                                " is not exhaustive for eigenvalue " +
                                std::to_string(eigenvalue));
  }
}

}  // namespace

LatticeMode make_mode(Int m, Int n) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("lattice mode indices must be >= 1");
  }
  return LatticeMode{m, n};
}

IndexSet::IndexSet(std::vector<LatticeMode> modes, std::string label)
    : modes_(std::move(modes)), label_(std::move(label)) {
  for (const auto& mode : modes_) make_mode(mode.m, mode.n);
  std::sort(modes_.begin(), modes_.end());
  if (std::adjacent_find(modes_.begin(), modes_.end()) != modes_.end()) {
    throw std::invalid_argument("index set contains duplicate modes");
  }
}

bool IndexSet::contains(const LatticeMode& mode) const {
  return std::binary_search(modes_.begin(), modes_.end(), mode);
}

Int IndexSet::max_eigenvalue() const noexcept {
  return modes_.empty() ? 0 : modes_.back().eigenvalue();
}

Int IndexSet::max_index() const noexcept {
  Int k = 0;
  for (const auto& mode : modes_) k = std::max({k, mode.m, mode.n});
  return k;
}

std::vector<LatticeMode> enumerate_modes(Int max_index) {
  if (max_index < 1) throw std::invalid_argument("max_index must be >= 1");
  std::vector<LatticeMode> modes;
  modes.reserve(static_cast<std::size_t>(max_index * max_index));
  for (Int m = 1; m <= max_index; ++m) {
    for (Int n = 1; n <= max_index; ++n) modes.push_back({m, n});
  }
  std::sort(modes.begin(), modes.end());
  return modes;
}

Int exhaustive_index(Int eigenvalue) {
  Int k = isqrt(eigenvalue - 1);
  if (k * k < eigenvalue - 1) ++k;
  return std::max<Int>(k, 1);
}

Int multiplicity(Int eigenvalue, Int max_index) {
  if (eigenvalue < 1 || max_index < 1) {
    throw std::invalid_argument("eigenvalue and max_index must be positive");
  }
  require_exhaustive(eigenvalue, max_index);
  Int count = 0;
  for (Int m = 1; m * m < eigenvalue; ++m) {
    Int rest = eigenvalue - m * m;
    Int n = isqrt(rest);
    if (n >= 1 && n * n == rest) ++count;
  }
  return count;
}

bool is_eigenvalue(Int value) {
  if (value < 2) return false;
  return multiplicity(value, exhaustive_index(value)) > 0;
}

Int next_eigenvalue(Int value) {
  Int v = std::max<Int>(value + 1, 2);
  while (!is_eigenvalue(v)) ++v;
  return v;
}

std::optional<Int> previous_eigenvalue(Int value) {
  for (Int v = value - 1; v >= 2; --v) {
    if (is_eigenvalue(v)) return v;
  }
  return std::nullopt;
}

std::vector<Int> distinct_eigenvalues(Int count) {
  std::vector<Int> values;
  Int v = 1;
  while (static_cast<Int>(values.size()) < count) {
    v = next_eigenvalue(v);
    values.push_back(v);
  }
  return values;
}

IndexSet cutoff_square(Int N) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  return IndexSet(enumerate_modes(N), "F_" + std::to_string(N));
}

IndexSet cutoff_ball(Int N) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  std::vector<LatticeMode> modes;
  for (Int m = 1; m <= N; ++m) {
    for (Int n = 1; n <= N; ++n) {
      if (m * m + n * n <= N * N) modes.push_back({m, n});
    }
  }
  return IndexSet(std::move(modes), "B_" + std::to_string(N));
}

IndexSet eigenvalue_window(Int lambda_max) {
  std::vector<LatticeMode> modes;
  for (Int m = 1; m * m < lambda_max; ++m) {
    for (Int n = 1; m * m + n * n <= lambda_max; ++n) modes.push_back({m, n});
  }
  return IndexSet(std::move(modes), "W_" + std::to_string(lambda_max));
}

std::vector<SplitEntry> splits(const IndexSet& F, Int max_index) {
  if (max_index < 1) throw std::invalid_argument("max_index must be >= 1");
  require_exhaustive(F.max_eigenvalue(), max_index);

  std::map<Int, SplitEntry> by_value;
  for (const auto& mode : F) {
    by_value[mode.eigenvalue()].eigenvalue = mode.eigenvalue();
  }
  for (auto& [value, entry] : by_value) {
    for (Int m = 1; m * m < value; ++m) {
      Int rest = value - m * m;
      Int n = isqrt(rest);
      if (n < 1 || n * n != rest) continue;
      LatticeMode mode{m, n};
      (F.contains(mode) ? entry.inside : entry.outside).push_back(mode);
    }
  }

  std::vector<SplitEntry> result;
  for (auto& [value, entry] : by_value) {
    if (!entry.outside.empty()) result.push_back(std::move(entry));
  }
  return result;
}

IndexSet bad_region(Int N) {
  IndexSet square = cutoff_square(N);
  std::vector<LatticeMode> gamma;
  for (const auto& entry : splits(square, exhaustive_index(square.max_eigenvalue()))) {
    gamma.insert(gamma.end(), entry.inside.begin(), entry.inside.end());
  }
  return IndexSet(std::move(gamma), "Gamma_" + std::to_string(N));
}

SpectrumWindow spectrum_window(const IndexSet& F, Int max_index) {
  if (F.empty()) throw std::invalid_argument("spectrum window of an empty index set");
  auto split = splits(F, max_index);
  if (!split.empty()) {
    throw SplittingError(F.label() + " splits eigenvalue " +
                         std::to_string(split.front().eigenvalue));
  }

  SpectrumWindow window;
  for (const auto& mode : F) {
    if (window.distinct_values_inside.empty() ||
        window.distinct_values_inside.back() != mode.eigenvalue()) {
      window.distinct_values_inside.push_back(mode.eigenvalue());
    }
  }
  for (Int value : window.distinct_values_inside) {
    window.mu_values.push_back(1.0 / static_cast<double>(value));
  }
  if (auto below = previous_eigenvalue(window.min_inside())) {
    window.gap_below = window.min_inside() - *below;
  }
  window.gap_above = next_eigenvalue(window.max_inside()) - window.max_inside();
  return window;
}

Int weyl_count(Int lambda_max) {
  if (lambda_max < 1) throw std::invalid_argument("lambda_max must be >= 1");
  Int count = 0;
  for (Int m = 1; m * m < lambda_max; ++m) count += isqrt(lambda_max - m * m);
  return count;
}

void write_index_set(std::ostream& os, const IndexSet& F) {
  os << "# " << F.label() << '\n';
  for (const auto& mode : F) os << mode.m << ' ' << mode.n << '\n';
}

IndexSet read_index_set(std::istream& is) {
  std::string label = "custom";
  std::vector<LatticeMode> modes;
  std::string line;
  bool seen_label = false;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!seen_label) {
        auto text = line.substr(first + 1);
        auto start = text.find_first_not_of(' ');
        label = start == std::string::npos ? "" : text.substr(start);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
        seen_label = true;
      }
      continue;
    }
    std::istringstream fields(line);
    Int m = 0, n = 0;
    std::string trailing;
    if (!(fields >> m >> n) || (fields >> trailing)) {
      throw std::invalid_argument("malformed index set line: '" + line + "'");
    }
    modes.push_back(make_mode(m, n));
  }
  return IndexSet(std::move(modes), label);
}

}  // namespace lpcont
