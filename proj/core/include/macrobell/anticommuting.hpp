#pragma once

// Constructions of mutually anti-commuting operator families across labeled
// regions: the plain binary tree (region sizes 1, 2, 4, ..., 2^(k-1)), the
// folded binary tree that curls back to spread the 2^k operators equitably,
// the two family-generating operations (within-region qubit shifts and X/Y
// flips), and the region-count/region-size bounds.

#include <cstdint>
#include <vector>

#include "macrobell/pauli.hpp"

namespace macrobell {

inline constexpr int kMaxConstructionRegions = 16;
inline constexpr int kMaxExhaustiveVerifyRegions = 8;

/// One factor per region: a 1-based qubit index within the region and a
/// Pauli index (1 = X, 2 = Y).
struct RegionFactor {
  int qubit_index;
  int pauli_index;

  bool operator==(const RegionFactor&) const = default;
};

/// A multi-region operator: exactly one single-qubit factor per region.
struct OperatorSequence {
  std::vector<RegionFactor> factors;

  bool operator==(const OperatorSequence&) const = default;
};

struct OperatorFamily {
  std::vector<OperatorSequence> sequences;
  std::vector<int> region_sizes;

  int region_count() const { return static_cast<int>(region_sizes.size()); }
  int total_qubits() const;

  /// Expands sequence `index` to a Pauli string over the family's full qubit
  /// span (regions concatenated in order, identity off the factors).
  PauliString expand(int index) const;
};

/// Smallest power of two that is >= x, never below 1. Defined on positive
/// reals because the folded tree evaluates it at fractional arguments.
std::uint64_t smallest_pow2_at_least(double x);

/// 2^k pairwise anti-commuting sequences over region sizes 1, 2, ..., 2^(k-1):
/// the qubit used in region j encodes the branch prefix, the Pauli encodes
/// the branch bit.
OperatorFamily simple_tree(int region_count);

/// 2^k pairwise anti-commuting sequences with every region size bounded by
/// sum_{l=1..k} smallest_pow2_at_least(2^(l-1)/(k-1)). Operators are placed
/// in batches of m, m, 2m, 4m, ... with m = smallest_pow2_at_least(
/// 2^(k-1)/(k-1)); each batch is a binary subtree whose branch levels are
/// spread greedily over the regions still available to it.
OperatorFamily folded_tree(int region_count);

/// Per-region bound on the folded-tree region sizes.
std::uint64_t folded_region_bound(int region_count);

/// The two generating operations applied uniformly to every sequence:
/// a cyclic within-region qubit shift (offset in [0, region size)) and an
/// optional X<->Y flip per region. Both preserve anti-commutation.
OperatorFamily generate_vector_family(const OperatorFamily& base,
                                      const std::vector<int>& shifts,
                                      const std::vector<bool>& flips);

/// True iff every pair of sequences anti-commutes (parity of regions sharing
/// a qubit with differing Pauli). Ground truth for all constructions.
bool verify_anticommuting(const OperatorFamily& family);

/// Same check for explicit Pauli strings (admits Z labels too).
bool verify_anticommuting(const std::vector<PauliString>& strings);

/// Minimum qubits any region needs for the refined tree reconstruction:
/// ceil(2^(k-2) / (k-1)). The paper states the bound without the refined
/// construction, so this exposes the formula only; folded_tree is the
/// constructive witness.
std::uint64_t min_region_size(int region_count);

/// Largest region count for which the tree construction guarantees an LHV
/// model on N qubits: floor(log2 N).
int max_lhv_regions(std::uint64_t qubit_count);

}  // namespace macrobell
