#pragma once

// q-calculus scalars and the brute-force combinatorial objects (permutations,
// shuffles, pair partitions) used both by the Fock-space code and as
// independent oracles in the verification suites.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace qwick {

inline constexpr int kDefaultPermutationCap = 8;
/// Cap on the number of points 2n of a pair partition.
inline constexpr int kDefaultPairingCap = 12;

/// q^k with the convention 0^0 = 1.
double q_power(double q, int k);

/// [n]_q = 1 + q + ... + q^{n-1}; [0]_q = 0. Throws PreconditionError if |q| >= 1.
double q_integer(int n, double q);

/// [n]_q! = [1]_q [2]_q ... [n]_q; [0]_q! = 1.
double q_factorial(int n, double q);

/// Gaussian binomial [n]_q! / ([i]_q! [n-i]_q!).
double q_binomial(int n, int i, double q);

/// A bijection of {0, ..., n-1}. image()[k] is pi(k+1) - 1 in one-based terms.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);

  [[nodiscard]] int size() const { return static_cast<int>(image_.size()); }
  [[nodiscard]] const std::vector<int>& image() const { return image_; }
  int operator[](int k) const { return image_[static_cast<std::size_t>(k)]; }

  static Permutation identity(int n);
  static Permutation reversal(int n);

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// Number of pairs i < j with pi(i) > pi(j).
int inversions(const Permutation& p);

/// All n! permutations in lexicographic order. n = 0 yields the single empty
/// permutation.
std::vector<Permutation> enumerate_permutations(int n, int cap = kDefaultPermutationCap);

/// Visits the permutations of enumerate_permutations without materializing them.
void for_each_permutation(int n, const std::function<void(const Permutation&)>& visit,
                          int cap = kDefaultPermutationCap);

/// An m-element subset A of {0, ..., total-1}, positions strictly increasing.
struct ShuffleSubset {
  int total = 0;
  std::vector<int> positions;

  [[nodiscard]] int size() const { return static_cast<int>(positions.size()); }
  [[nodiscard]] std::vector<int> complement() const;
};

struct Shuffle {
  ShuffleSubset subset;
  /// #{(j, i) : j in complement, i in subset, j < i}.
  int inversions = 0;
};

/// All C(m+n, m) subsets in lexicographic order of positions.
std::vector<Shuffle> enumerate_shuffles(int m, int n, int cap = kDefaultPermutationCap);

/// |sum_A |q|^{inv(A)} - [m+n choose m]_{|q|}|.
double macmahon_residual(int m, int n, double q, int cap = kDefaultPermutationCap);

/// A perfect matching of {0, ..., 2n-1}; each block is stored as (a, b) with a < b.
struct PairPartition {
  std::vector<std::pair<int, int>> blocks;
  int crossings = 0;
};

/// Number of block pairs {a,b}, {c,d} with a < c < b < d.
int count_crossings(std::span<const std::pair<int, int>> blocks);

/// All (2n-1)!! pair partitions of 2n points, each with its crossing count.
std::vector<PairPartition> enumerate_pair_partitions(int n, int cap = kDefaultPairingCap);

/// c_k = number of pair partitions of 2n points with exactly k crossings,
/// k = 0 .. n(n-1)/2.
std::vector<std::uint64_t> crossing_polynomial(int n, int cap = kDefaultPairingCap);

/// sum_k c_k q^k with 0^0 = 1.
double evaluate_crossing_polynomial(std::span<const std::uint64_t> coefficients, double q);

}  // namespace qwick
