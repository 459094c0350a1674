#include "macrobell/anticommuting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace macrobell {

int OperatorFamily::total_qubits() const {
  int total = 0;
  for (int n : region_sizes) total += n;
  return total;
}

PauliString OperatorFamily::expand(int index) const {
  const OperatorSequence& seq = sequences.at(index);
  if (seq.factors.size() != region_sizes.size()) {
    throw std::invalid_argument("OperatorFamily::expand: malformed sequence");
  }
  std::vector<Pauli> labels(total_qubits(), Pauli::I);
  int offset = 0;
  for (int r = 0; r < region_count(); ++r) {
    const RegionFactor& f = seq.factors[r];
    if (f.qubit_index < 1 || f.qubit_index > region_sizes[r]) {
      throw std::invalid_argument("OperatorFamily::expand: qubit index outside region");
    }
    labels[offset + f.qubit_index - 1] = (f.pauli_index == 1) ? Pauli::X : Pauli::Y;
    offset += region_sizes[r];
  }
  return PauliString(std::move(labels));
}

std::uint64_t smallest_pow2_at_least(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("smallest_pow2_at_least: argument must be positive");
  std::uint64_t p = 1;
  while (static_cast<double>(p) < x) {
    if (p > (std::uint64_t{1} << 62)) {
      throw std::invalid_argument("smallest_pow2_at_least: argument too large");
    }
    p <<= 1;
  }
  return p;
}

namespace {

void check_region_count(int k, int minimum) {
  if (k < minimum || k > kMaxConstructionRegions) {
    throw std::invalid_argument("tree construction: region count out of supported range");
  }
}

int sequence_anti_positions(const OperatorSequence& a, const OperatorSequence& b) {
  int count = 0;
  for (std::size_t r = 0; r < a.factors.size(); ++r) {
    if (a.factors[r].qubit_index == b.factors[r].qubit_index &&
        a.factors[r].pauli_index != b.factors[r].pauli_index) {
      ++count;
    }
  }
  return count;
}

bool pairwise_anticommuting(const std::vector<OperatorSequence>& seqs, std::size_t stride) {
  std::size_t pair = 0;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (std::size_t j = i + 1; j < seqs.size(); ++j, ++pair) {
      if (stride > 1 && pair % stride != 0) continue;
      if (sequence_anti_positions(seqs[i], seqs[j]) % 2 == 0) return false;
    }
  }
  return true;
}

void verify_or_throw(const OperatorFamily& family, const char* what) {
  const int k = family.region_count();
  // Exhaustive up to the verification cap; strided sample beyond (pair count
  // grows as 4^k).
  const std::size_t stride = (k <= kMaxExhaustiveVerifyRegions) ? 1 : 37;
  if (!pairwise_anticommuting(family.sequences, stride)) {
    throw std::runtime_error(std::string(what) + ": constructed family fails anti-commutation");
  }
}

// Builds one binary subtree over the varying positions `regions` for the
// given block of sequences (all sharing their factors outside `regions`).
// The branch level of each recursion step is hosted by the currently
// most-loaded available region, so deep (wide) levels land on lightly used
// regions and the 2^k operators spread equitably. Sibling subtrees allocate
// fresh qubits, which keeps them disjoint region-wise.
void build_subtree(std::vector<OperatorSequence>& sequences, const std::vector<int>& block,
                   std::vector<int> regions, std::vector<int>& next_free) {
  if (regions.empty() || block.size() != (std::size_t{1} << regions.size())) {
    throw std::logic_error("build_subtree: block size does not match branch positions");
  }
  int host = regions[0];
  for (int r : regions) {
    if (next_free[r] > next_free[host]) host = r;
  }
  const int qubit = next_free[host]++;

  const std::size_t half = block.size() / 2;
  for (std::size_t i = 0; i < block.size(); ++i) {
    sequences[block[i]].factors[host] = RegionFactor{qubit, i < half ? 1 : 2};
  }
  if (regions.size() == 1) return;

  std::vector<int> rest;
  rest.reserve(regions.size() - 1);
  for (int r : regions) {
    if (r != host) rest.push_back(r);
  }
  std::vector<int> low(block.begin(), block.begin() + half);
  std::vector<int> high(block.begin() + half, block.end());
  build_subtree(sequences, low, rest, next_free);
  build_subtree(sequences, high, rest, next_free);
}

}  // namespace

OperatorFamily simple_tree(int region_count) {
  check_region_count(region_count, 1);
  const int k = region_count;
  OperatorFamily family;
  family.region_sizes.resize(k);
  for (int j = 0; j < k; ++j) family.region_sizes[j] = 1 << j;

  const std::size_t count = std::size_t{1} << k;
  family.sequences.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    OperatorSequence seq;
    seq.factors.resize(k);
    for (int j = 0; j < k; ++j) {
      // Region j+1 hosts one qubit per branch prefix b_1..b_j; the Pauli is
      // the branch bit itself.
      const int prefix = static_cast<int>(s >> (k - j));
      const int bit = static_cast<int>((s >> (k - 1 - j)) & 1);
      seq.factors[j] = RegionFactor{prefix + 1, bit + 1};
    }
    family.sequences[s] = std::move(seq);
  }
  verify_or_throw(family, "simple_tree");
  return family;
}

OperatorFamily folded_tree(int region_count) {
  check_region_count(region_count, 2);
  const int k = region_count;
  const std::uint64_t m =
      smallest_pow2_at_least(std::pow(2.0, k - 1) / static_cast<double>(k - 1));
  int mu = 0;
  while ((std::uint64_t{1} << mu) < m) ++mu;
  const int first_varying = k - mu;  // 0-based region index of the first branch position

  const std::size_t count = std::size_t{1} << k;
  std::vector<OperatorSequence> sequences(count);
  for (auto& seq : sequences) seq.factors.resize(k);

  // Regions left of the first branch position carry the shared qubit 1 as
  // fixed X or pivot Y; their allocator starts past it.
  std::vector<int> next_free(k, 1);
  for (int r = 0; r < first_varying; ++r) next_free[r] = 2;

  // Batch 1: strings 0..m-1 (all-X prefix), branching on the last mu regions.
  {
    std::vector<int> block(m);
    std::iota(block.begin(), block.end(), 0);
    for (auto idx : block) {
      for (int r = 0; r < first_varying; ++r) sequences[idx].factors[r] = RegionFactor{1, 1};
    }
    std::vector<int> varying(mu);
    std::iota(varying.begin(), varying.end(), first_varying);
    build_subtree(sequences, block, varying, next_free);
  }

  // Batch v >= 2: strings whose first Y sits at the pivot region; sizes
  // m, 2m, 4m, ... until the binary string is exhausted at 2^k.
  for (std::size_t batch_start = m; batch_start < count; batch_start *= 2) {
    int pivot = k;  // 0-based position of the leading Y bit
    std::size_t top = batch_start;
    while (top) {
      top >>= 1;
      --pivot;
    }
    std::vector<int> block(batch_start);
    std::iota(block.begin(), block.end(), static_cast<int>(batch_start));
    for (auto idx : block) {
      for (int r = 0; r < pivot; ++r) sequences[idx].factors[r] = RegionFactor{1, 1};
      sequences[idx].factors[pivot] = RegionFactor{1, 2};
    }
    std::vector<int> varying(k - pivot - 1);
    std::iota(varying.begin(), varying.end(), pivot + 1);
    build_subtree(sequences, block, varying, next_free);
  }

  OperatorFamily family;
  family.sequences = std::move(sequences);
  family.region_sizes.resize(k);
  for (int r = 0; r < k; ++r) family.region_sizes[r] = next_free[r] - 1;
  verify_or_throw(family, "folded_tree");
  return family;
}

std::uint64_t folded_region_bound(int region_count) {
  if (region_count < 2) throw std::invalid_argument("folded_region_bound: need k >= 2");
  std::uint64_t bound = 0;
  for (int l = 1; l <= region_count; ++l) {
    bound += smallest_pow2_at_least(std::pow(2.0, l - 1) / static_cast<double>(region_count - 1));
  }
  return bound;
}

OperatorFamily generate_vector_family(const OperatorFamily& base, const std::vector<int>& shifts,
                                      const std::vector<bool>& flips) {
  const int k = base.region_count();
  if (static_cast<int>(shifts.size()) != k || static_cast<int>(flips.size()) != k) {
    throw std::invalid_argument("generate_vector_family: one shift and flip per region required");
  }
  for (int r = 0; r < k; ++r) {
    if (shifts[r] < 0 || shifts[r] >= base.region_sizes[r]) {
      throw std::invalid_argument("generate_vector_family: shift offset out of range");
    }
  }
  OperatorFamily out = base;
  for (auto& seq : out.sequences) {
    for (int r = 0; r < k; ++r) {
      RegionFactor& f = seq.factors[r];
      f.qubit_index = (f.qubit_index - 1 + shifts[r]) % base.region_sizes[r] + 1;
      if (flips[r]) f.pauli_index = 3 - f.pauli_index;
    }
  }
  return out;
}

bool verify_anticommuting(const OperatorFamily& family) {
  for (const auto& seq : family.sequences) {
    if (static_cast<int>(seq.factors.size()) != family.region_count()) return false;
  }
  return pairwise_anticommuting(family.sequences, 1);
}

bool verify_anticommuting(const std::vector<PauliString>& strings) {
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = i + 1; j < strings.size(); ++j) {
      if (!strings[i].anticommutes_with(strings[j])) return false;
    }
  }
  return true;
}

std::uint64_t min_region_size(int region_count) {
  if (region_count < 2 || region_count > 63) {
    throw std::invalid_argument("min_region_size: need 2 <= k <= 63");
  }
  const std::uint64_t numerator = std::uint64_t{1} << (region_count - 2);
  const std::uint64_t divisor = static_cast<std::uint64_t>(region_count - 1);
  return (numerator + divisor - 1) / divisor;
}

int max_lhv_regions(std::uint64_t qubit_count) {
  if (qubit_count < 2) throw std::invalid_argument("max_lhv_regions: need at least 2 qubits");
  int k = 0;
  while (qubit_count >>= 1) ++k;
  return k;
}

}  // namespace macrobell
