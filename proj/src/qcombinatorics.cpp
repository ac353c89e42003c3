#include "qwick/qcombinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qwick/error.hpp"

namespace qwick {
namespace {

void require_q(double q) {
  if (!(std::abs(q) < 1.0)) {
    throw PreconditionError("deformation parameter must satisfy |q| < 1, got " +
                            std::to_string(q));
  }
}

void require_cap(int n, int cap, const char* what) {
  if (n > cap) {
    throw CapExceeded(std::string(what) + ": size " + std::to_string(n) +
                      " exceeds enumeration cap " + std::to_string(cap));
  }
}

}  // namespace

double q_power(double q, int k) {
  double result = 1.0;
  for (int i = 0; i < k; ++i) result *= q;
  return result;
}

double q_integer(int n, double q) {
  require_q(q);
  if (n < 0) throw std::invalid_argument("q_integer: n must be nonnegative");
  double sum = 0.0;
  double power = 1.0;
  for (int i = 0; i < n; ++i) {
    sum += power;
    power *= q;
  }
  return sum;
}

double q_factorial(int n, double q) {
  require_q(q);
  if (n < 0) throw std::invalid_argument("q_factorial: n must be nonnegative");
  double product = 1.0;
  for (int k = 1; k <= n; ++k) product *= q_integer(k, q);
  return product;
}

double q_binomial(int n, int i, double q) {
  require_q(q);
  if (n < 0 || i < 0 || i > n) {
    throw std::out_of_range("q_binomial: need 0 <= i <= n, got n=" + std::to_string(n) +
                            " i=" + std::to_string(i));
  }
  // Product form avoids forming large factorials: prod_{k=1}^{i} [n-i+k]_q / [k]_q.
  double result = 1.0;
  for (int k = 1; k <= i; ++k) result *= q_integer(n - i + k, q) / q_integer(k, q);
  return result;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("Permutation: image is not a bijection");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::reversal(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) image[static_cast<std::size_t>(k)] = n - 1 - k;
  return Permutation(std::move(image));
}

int inversions(const Permutation& p) {
  int count = 0;
  for (int i = 0; i < p.size(); ++i) {
    for (int j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) ++count;
    }
  }
  return count;
}

void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit, int cap) {
  if (n < 0) throw std::invalid_argument("for_each_permutation: n must be nonnegative");
  require_cap(n, cap, "permutation enumeration");
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  do {
    visit(Permutation(image));
  } while (std::next_permutation(image.begin(), image.end()));
}

std::vector<Permutation> enumerate_permutations(int n, int cap) {
  std::vector<Permutation> out;
  for_each_permutation(n, [&](const Permutation& p) { out.push_back(p); }, cap);
  return out;
}

std::vector<int> ShuffleSubset::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(total - size()));
  auto it = positions.begin();
  for (int k = 0; k < total; ++k) {
    if (it != positions.end() && *it == k) {
      ++it;
    } else {
      rest.push_back(k);
    }
  }
  return rest;
}

std::vector<Shuffle> enumerate_shuffles(int m, int n, int cap) {
  if (m < 0 || n < 0) throw std::invalid_argument("enumerate_shuffles: sizes must be nonnegative");
  require_cap(m + n, cap, "shuffle enumeration");
  const int total = m + n;
  std::vector<Shuffle> out;
  // Lexicographic walk over increasing position tuples.
  std::vector<int> pos(static_cast<std::size_t>(m));
  std::iota(pos.begin(), pos.end(), 0);
  while (true) {
    Shuffle sh;
    sh.subset = ShuffleSubset{total, pos};
    for (int j : sh.subset.complement()) {
      for (int i : pos) {
        if (j < i) ++sh.inversions;
      }
    }
    out.push_back(std::move(sh));
    int k = m - 1;
    while (k >= 0 && pos[static_cast<std::size_t>(k)] == total - m + k) --k;
    if (k < 0) break;
    ++pos[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < m; ++t) {
      pos[static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  return out;
}

double macmahon_residual(int m, int n, double q, int cap) {
  require_q(q);
  const double aq = std::abs(q);
  double sum = 0.0;
  for (const Shuffle& sh : enumerate_shuffles(m, n, cap)) sum += q_power(aq, sh.inversions);
  return std::abs(sum - q_binomial(m + n, m, aq));
}

int count_crossings(std::span<const std::pair<int, int>> blocks) {
  int count = 0;
  for (std::size_t x = 0; x < blocks.size(); ++x) {
    for (std::size_t y = 0; y < blocks.size(); ++y) {
      const auto [a, b] = blocks[x];
      const auto [c, d] = blocks[y];
      if (a < c && c < b && b < d) ++count;
    }
  }
  return count;
}

namespace {

void extend_matching(std::vector<int>& open, std::vector<std::pair<int, int>>& blocks,
                     std::vector<PairPartition>& out) {
  if (open.empty()) {
    out.push_back(PairPartition{blocks, count_crossings(blocks)});
    return;
  }
  const int first = open.front();
  for (std::size_t k = 1; k < open.size(); ++k) {
    const int partner = open[k];
    std::vector<int> rest;
    rest.reserve(open.size() - 2);
    for (std::size_t t = 1; t < open.size(); ++t) {
      if (t != k) rest.push_back(open[t]);
    }
    blocks.emplace_back(first, partner);
    extend_matching(rest, blocks, out);
    blocks.pop_back();
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int n, int cap) {
  if (n < 0) throw std::invalid_argument("enumerate_pair_partitions: n must be nonnegative");
  require_cap(2 * n, cap, "pair partition enumeration");
  std::vector<int> open(static_cast<std::size_t>(2 * n));
  std::iota(open.begin(), open.end(), 0);
  std::vector<std::pair<int, int>> blocks;
  std::vector<PairPartition> out;
  extend_matching(open, blocks, out);
  return out;
}

std::vector<std::uint64_t> crossing_polynomial(int n, int cap) {
  const auto partitions = enumerate_pair_partitions(n, cap);
  std::vector<std::uint64_t> coeffs(static_cast<std::size_t>(n * (n - 1) / 2 + 1), 0);
  for (const auto& p : partitions) ++coeffs[static_cast<std::size_t>(p.crossings)];
  return coeffs;
}

double evaluate_crossing_polynomial(std::span<const std::uint64_t> coefficients, double q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    sum += static_cast<double>(coefficients[k]) * q_power(q, static_cast<int>(k));
  }
  return sum;
}

}  // namespace qwick
