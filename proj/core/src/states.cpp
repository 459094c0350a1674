#include "macrobell/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace macrobell {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_dim(Eigen::Index n) {
  int q = 0;
  while ((Eigen::Index{1} << q) < n) ++q;
  return q;
}

// Bit of qubit q inside basis index b (qubit 0 = most significant).
inline int qubit_bit(Eigen::Index b, int qubit_count, int q) {
  return static_cast<int>((b >> (qubit_count - 1 - q)) & 1);
}

inline Eigen::Index qubit_mask(int qubit_count, int q) {
  return Eigen::Index{1} << (qubit_count - 1 - q);
}

// Spreads the bits of `packed` across the positions listed in `positions`
// (ascending significance = lower list index is more significant qubit).
Eigen::Index scatter_bits(Eigen::Index packed, const std::vector<Eigen::Index>& position_masks) {
  Eigen::Index out = 0;
  const int n = static_cast<int>(position_masks.size());
  for (int i = 0; i < n; ++i) {
    if ((packed >> (n - 1 - i)) & 1) out |= position_masks[i];
  }
  return out;
}

std::vector<Eigen::Index> masks_for(const std::vector<int>& qubits, int qubit_count) {
  std::vector<Eigen::Index> masks;
  masks.reserve(qubits.size());
  for (int q : qubits) masks.push_back(qubit_mask(qubit_count, q));
  return masks;
}

std::vector<int> complement_qubits(const std::vector<int>& keep, int qubit_count) {
  std::vector<int> env;
  std::set<int> keep_set(keep.begin(), keep.end());
  for (int q = 0; q < qubit_count; ++q) {
    if (!keep_set.count(q)) env.push_back(q);
  }
  return env;
}

void check_keep_set(const std::vector<int>& keep, int qubit_count) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= qubit_count) {
      throw std::invalid_argument("partial_trace: keep index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument("partial_trace: keep set must be strictly ascending");
    }
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || !is_power_of_two(matrix_.rows())) {
    throw std::invalid_argument("DensityMatrix: dimension must be a power of two");
  }
  qubits_ = log2_dim(matrix_.rows());
  if (qubits_ < 1 || qubits_ > kMaxDenseQubits) {
    throw std::invalid_argument("DensityMatrix: qubit count outside dense limit");
  }
  const double herm_err = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermiticityTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace differs from one");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  if (min_eigenvalue() < -kPsdTol) {
    throw std::runtime_error("DensityMatrix: not positive semi-definite within tolerance");
  }
}

PureState::PureState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (!is_power_of_two(amplitudes_.size())) {
    throw std::invalid_argument("PureState: dimension must be a power of two");
  }
  qubits_ = log2_dim(amplitudes_.size());
  if (qubits_ < 1 || qubits_ > kMaxPureQubits) {
    throw std::invalid_argument("PureState: qubit count outside pure-state limit");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kAmplitudeNormTol) {
    throw std::invalid_argument("PureState: amplitudes are not normalized");
  }
}

DensityMatrix PureState::to_density_matrix() const {
  if (qubits_ > kMaxDenseQubits) {
    throw std::invalid_argument("PureState::to_density_matrix beyond dense limit");
  }
  return DensityMatrix(amplitudes_ * amplitudes_.adjoint());
}

int state_qubit_count(const AnyState& state) {
  return std::visit([](const auto& s) { return s.qubit_count(); }, state);
}

DensityMatrix to_density(const AnyState& state) {
  if (const auto* psi = std::get_if<PureState>(&state)) return psi->to_density_matrix();
  return std::get<DensityMatrix>(state);
}

void Partition::validate(int qubit_count) const {
  if (regions.empty()) throw std::invalid_argument("Partition: no regions");
  std::set<int> seen;
  for (const auto& region : regions) {
    if (region.empty()) throw std::invalid_argument("Partition: empty region");
    for (std::size_t i = 0; i < region.size(); ++i) {
      const int q = region[i];
      if (q < 0 || q >= qubit_count) {
        throw std::invalid_argument("Partition: qubit index out of range");
      }
      if (i > 0 && region[i] <= region[i - 1]) {
        throw std::invalid_argument("Partition: region indices must be strictly ascending");
      }
      if (!seen.insert(q).second) {
        throw std::invalid_argument("Partition: regions are not disjoint");
      }
    }
  }
}

Partition Partition::two_regions(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return Partition{{std::move(a), std::move(b)}};
}

Partition Partition::contiguous(const std::vector<int>& region_sizes) {
  Partition p;
  int next = 0;
  for (int size : region_sizes) {
    if (size < 1) throw std::invalid_argument("Partition: region size must be positive");
    std::vector<int> region(size);
    std::iota(region.begin(), region.end(), next);
    next += size;
    p.regions.push_back(std::move(region));
  }
  return p;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.qubit_count();
  check_keep_set(keep, n);
  const int k = static_cast<int>(keep.size());
  const std::vector<int> env = complement_qubits(keep, n);
  const auto keep_masks = masks_for(keep, n);
  const auto env_masks = masks_for(env, n);

  const Eigen::Index out_dim = Eigen::Index{1} << k;
  const Eigen::Index env_dim = Eigen::Index{1} << (n - k);

  std::vector<Eigen::Index> keep_scatter(out_dim), env_scatter(env_dim);
  for (Eigen::Index r = 0; r < out_dim; ++r) keep_scatter[r] = scatter_bits(r, keep_masks);
  for (Eigen::Index e = 0; e < env_dim; ++e) env_scatter[e] = scatter_bits(e, env_masks);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < out_dim; ++r) {
    for (Eigen::Index c = 0; c < out_dim; ++c) {
      Complex sum = 0.0;
      for (Eigen::Index e = 0; e < env_dim; ++e) {
        sum += m(keep_scatter[r] | env_scatter[e], keep_scatter[c] | env_scatter[e]);
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace(const PureState& psi, const std::vector<int>& keep) {
  const int n = psi.qubit_count();
  check_keep_set(keep, n);
  const int k = static_cast<int>(keep.size());
  if (k > kMaxDenseQubits) {
    throw std::invalid_argument("partial_trace: reduced state beyond dense limit");
  }
  const std::vector<int> env = complement_qubits(keep, n);
  const auto keep_masks = masks_for(keep, n);
  const auto env_masks = masks_for(env, n);

  const Eigen::Index out_dim = Eigen::Index{1} << k;
  const Eigen::Index env_dim = Eigen::Index{1} << (n - k);

  std::vector<Eigen::Index> keep_scatter(out_dim);
  for (Eigen::Index r = 0; r < out_dim; ++r) keep_scatter[r] = scatter_bits(r, keep_masks);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
  Eigen::VectorXcd slice(out_dim);
  const auto& amps = psi.amplitudes();
  for (Eigen::Index e = 0; e < env_dim; ++e) {
    const Eigen::Index env_bits = scatter_bits(e, env_masks);
    for (Eigen::Index r = 0; r < out_dim; ++r) slice(r) = amps(keep_scatter[r] | env_bits);
    out.noalias() += slice * slice.adjoint();
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix permute_qubits(const DensityMatrix& rho, const std::vector<int>& new_position) {
  const int n = rho.qubit_count();
  if (static_cast<int>(new_position.size()) != n) {
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  }
  const Eigen::Index dim = rho.dim();
  std::vector<Eigen::Index> map(dim, 0);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index out = 0;
    for (int q = 0; q < n; ++q) {
      if (qubit_bit(b, n, q)) out |= qubit_mask(n, new_position[q]);
    }
    map[b] = out;
  }
  Eigen::MatrixXcd out(dim, dim);
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) out(map[r], map[c]) = m(r, c);
  }
  return DensityMatrix(std::move(out));
}

PureState permute_qubits(const PureState& psi, const std::vector<int>& new_position) {
  const int n = psi.qubit_count();
  if (static_cast<int>(new_position.size()) != n) {
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  }
  const Eigen::Index dim = psi.dim();
  Eigen::VectorXcd out(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index target = 0;
    for (int q = 0; q < n; ++q) {
      if (qubit_bit(b, n, q)) target |= qubit_mask(n, new_position[q]);
    }
    out(target) = psi.amplitudes()(b);
  }
  return PureState(std::move(out));
}

namespace {

// Reduced state on `tuple` (one qubit per region, in region order), obtained
// by tracing to the sorted index set and permuting back into region order.
template <typename State>
Eigen::MatrixXcd tuple_reduction(const State& state, const std::vector<int>& tuple) {
  std::vector<int> sorted = tuple;
  std::sort(sorted.begin(), sorted.end());
  DensityMatrix reduced = partial_trace(state, sorted);
  // Local qubit t corresponds to global sorted[t]; send it to the slot where
  // the region-order tuple wants it.
  std::vector<int> new_position(tuple.size());
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    const auto slot = std::find(tuple.begin(), tuple.end(), sorted[t]) - tuple.begin();
    new_position[t] = static_cast<int>(slot);
  }
  return permute_qubits(reduced, new_position).matrix();
}

template <typename State>
DensityMatrix effective_state_impl(const State& state, const Partition& partition) {
  partition.validate(state.qubit_count());
  const int k = partition.region_count();
  if (k > kMaxDenseQubits) {
    throw std::invalid_argument("effective_state: too many regions for a dense output");
  }
  const Eigen::Index out_dim = Eigen::Index{1} << k;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(out_dim, out_dim);

  std::vector<int> counter(k, 0);
  std::vector<int> tuple(k);
  long long tuples = 0;
  while (true) {
    for (int r = 0; r < k; ++r) tuple[r] = partition.regions[r][counter[r]];
    sum += tuple_reduction(state, tuple);
    ++tuples;
    int r = k - 1;
    while (r >= 0 && ++counter[r] == partition.region_size(r)) counter[r--] = 0;
    if (r < 0) break;
  }
  sum /= static_cast<double>(tuples);
  return DensityMatrix(std::move(sum));
}

}  // namespace

DensityMatrix effective_state(const DensityMatrix& rho, const Partition& partition) {
  return effective_state_impl(rho, partition);
}

DensityMatrix effective_state(const PureState& psi, const Partition& partition) {
  return effective_state_impl(psi, partition);
}

DensityMatrix effective_state(const AnyState& state, const Partition& partition) {
  return std::visit([&](const auto& s) { return effective_state_impl(s, partition); }, state);
}

DensityMatrix effective_state_over_sites(const DensityMatrix& rho,
                                         const std::vector<SiteGroup>& regions) {
  if (regions.empty()) throw std::invalid_argument("effective_state_over_sites: no regions");
  const int k = static_cast<int>(regions.size());
  int out_qubits = 0;
  for (const auto& group : regions) {
    if (group.empty()) throw std::invalid_argument("effective_state_over_sites: empty region");
    const std::size_t width = group.front().size();
    for (const auto& site : group) {
      if (site.size() != width) {
        throw std::invalid_argument("effective_state_over_sites: uneven site widths in a region");
      }
    }
    out_qubits += static_cast<int>(width);
  }
  if (out_qubits > kMaxDenseQubits) {
    throw std::invalid_argument("effective_state_over_sites: output beyond dense limit");
  }

  const Eigen::Index out_dim = Eigen::Index{1} << out_qubits;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(out_dim, out_dim);

  std::vector<int> counter(k, 0);
  long long tuples = 0;
  while (true) {
    std::vector<int> qubits;  // site qubits concatenated in region order
    for (int r = 0; r < k; ++r) {
      const auto& site = regions[r][counter[r]];
      qubits.insert(qubits.end(), site.begin(), site.end());
    }
    sum += tuple_reduction(rho, qubits);
    ++tuples;
    int r = k - 1;
    while (r >= 0 && ++counter[r] == static_cast<int>(regions[r].size())) counter[r--] = 0;
    if (r < 0) break;
  }
  sum /= static_cast<double>(tuples);
  return DensityMatrix(std::move(sum));
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Global relabeling that applies `perm` to the listed qubits and fixes the
// rest: qubits[i] -> qubits[perm[i]].
void apply_region_perm(std::vector<int>& new_position, const std::vector<int>& qubits,
                       const std::vector<int>& perm) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    new_position[qubits[i]] = qubits[perm[i]];
  }
}

DensityMatrix average_over_permutations(
    const DensityMatrix& rho,
    const std::vector<std::vector<int>>& region_qubits,
    const std::vector<std::vector<std::vector<int>>>& perms_per_region) {
  const int n = rho.qubit_count();
  const int k = static_cast<int>(region_qubits.size());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
  std::vector<int> counter(k, 0);
  long long terms = 0;
  while (true) {
    std::vector<int> new_position(n);
    std::iota(new_position.begin(), new_position.end(), 0);
    for (int r = 0; r < k; ++r) {
      apply_region_perm(new_position, region_qubits[r], perms_per_region[r][counter[r]]);
    }
    sum += permute_qubits(rho, new_position).matrix();
    ++terms;
    int r = k - 1;
    while (r >= 0 && ++counter[r] == static_cast<int>(perms_per_region[r].size())) {
      counter[r--] = 0;
    }
    if (r < 0) break;
  }
  sum /= static_cast<double>(terms);
  return DensityMatrix(std::move(sum));
}

}  // namespace

DensityMatrix permutation_symmetrize(const DensityMatrix& rho, const Partition& partition,
                                     int sample_count, std::uint64_t seed) {
  partition.validate(rho.qubit_count());
  int max_size = 0;
  for (const auto& region : partition.regions) {
    max_size = std::max(max_size, static_cast<int>(region.size()));
  }

  if (max_size <= kExactSymmetrizeLimit) {
    std::vector<std::vector<std::vector<int>>> perms;
    for (const auto& region : partition.regions) {
      perms.push_back(all_permutations(static_cast<int>(region.size())));
    }
    return average_over_permutations(rho, partition.regions, perms);
  }

  if (sample_count <= 0) {
    throw std::invalid_argument(
        "permutation_symmetrize: region size beyond exact limit; pass sample_count");
  }
  // Sampled fallback: uniform random within-region permutation per term.
  Rng rng(seed);
  const int n = rho.qubit_count();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
  for (int s = 0; s < sample_count; ++s) {
    std::vector<int> new_position(n);
    std::iota(new_position.begin(), new_position.end(), 0);
    for (const auto& region : partition.regions) {
      std::vector<int> perm(region.size());
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
        std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
      }
      apply_region_perm(new_position, region, perm);
    }
    sum += permute_qubits(rho, new_position).matrix();
  }
  sum /= static_cast<double>(sample_count);
  return DensityMatrix(std::move(sum));
}

DensityMatrix symmetrize_over_sites(const DensityMatrix& rho,
                                    const std::vector<SiteGroup>& regions) {
  // Site permutations move whole blocks, preserving within-site order.
  std::vector<std::vector<int>> flat_regions;
  std::vector<std::vector<std::vector<int>>> perms;
  for (const auto& group : regions) {
    const std::size_t width = group.empty() ? 0 : group.front().size();
    std::vector<int> flat;
    for (const auto& site : group) {
      if (site.size() != width) {
        throw std::invalid_argument("symmetrize_over_sites: uneven site widths in a region");
      }
      flat.insert(flat.end(), site.begin(), site.end());
    }
    flat_regions.push_back(std::move(flat));
    // Site permutation -> qubit permutation over the flattened listing.
    std::vector<std::vector<int>> qubit_perms;
    for (const auto& site_perm : all_permutations(static_cast<int>(group.size()))) {
      std::vector<int> qp(group.size() * width);
      for (std::size_t s = 0; s < group.size(); ++s) {
        for (std::size_t t = 0; t < width; ++t) {
          qp[s * width + t] = static_cast<int>(site_perm[s] * width + t);
        }
      }
      qubit_perms.push_back(std::move(qp));
    }
    perms.push_back(std::move(qubit_perms));
  }
  return average_over_permutations(rho, flat_regions, perms);
}

DensityMatrix heisenberg_thermal(int qubit_count, double beta,
                                 const std::vector<HeisenbergCoupling>& couplings) {
  if (qubit_count < 2 || qubit_count > kMaxDenseQubits) {
    throw std::invalid_argument("heisenberg_thermal: qubit count outside dense limit");
  }
  const Eigen::Index dim = Eigen::Index{1} << qubit_count;

  Eigen::Matrix4cd exchange = Eigen::Matrix4cd::Zero();
  for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
    const Eigen::Matrix2cd s = pauli_matrix(p);
    exchange += kron(s, s);
  }

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& edge : couplings) {
    if (edge.a < 0 || edge.a >= qubit_count || edge.b < 0 || edge.b >= qubit_count ||
        edge.a == edge.b) {
      throw std::invalid_argument("heisenberg_thermal: invalid coupling edge");
    }
    const int hi = std::min(edge.a, edge.b);
    const int lo = std::max(edge.a, edge.b);
    // exchange is symmetric under qubit swap, so the (hi, lo) embedding works
    // for either edge orientation.
    const Eigen::Index mask_hi = Eigen::Index{1} << (qubit_count - 1 - hi);
    const Eigen::Index mask_lo = Eigen::Index{1} << (qubit_count - 1 - lo);
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (b & (mask_hi | mask_lo)) continue;  // enumerate env patterns only
      for (int r = 0; r < 4; ++r) {
        const Eigen::Index row = b | ((r >> 1) ? mask_hi : 0) | ((r & 1) ? mask_lo : 0);
        for (int c = 0; c < 4; ++c) {
          const Eigen::Index col = b | ((c >> 1) ? mask_hi : 0) | ((c & 1) ? mask_lo : 0);
          h(row, col) += edge.strength * exchange(r, c);
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXd evals = solver.eigenvalues();
  const double shift = evals.minCoeff();
  Eigen::VectorXd weights(dim);
  for (Eigen::Index i = 0; i < dim; ++i) weights(i) = std::exp(-beta * (evals(i) - shift));
  weights /= weights.sum();
  Eigen::MatrixXcd rho =
      solver.eigenvectors() * weights.asDiagonal() * solver.eigenvectors().adjoint();
  return DensityMatrix(std::move(rho));
}

WernerState::WernerState(double v) : visibility(v) {
  constexpr double slack = 1e-9;
  if (v < kWernerVisibilityMin - slack || v > 1.0 + slack) {
    throw std::invalid_argument("WernerState: visibility outside [-1/3, 1]");
  }
  visibility = std::clamp(v, kWernerVisibilityMin, 1.0);
}

DensityMatrix WernerState::to_density_matrix() const {
  const PureState singlet = std::get<PureState>(named_state("singlet", 2));
  const Eigen::MatrixXcd proj = singlet.amplitudes() * singlet.amplitudes().adjoint();
  Eigen::MatrixXcd rho =
      visibility * proj + (1.0 - visibility) * Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  return DensityMatrix(std::move(rho));
}

double singlet_fidelity(const DensityMatrix& rho2) {
  if (rho2.qubit_count() != 2) {
    throw std::invalid_argument("singlet_fidelity: two-qubit state required");
  }
  const PureState singlet = std::get<PureState>(named_state("singlet", 2));
  const Complex f = singlet.amplitudes().adjoint() * rho2.matrix() * singlet.amplitudes();
  return f.real();
}

WernerState twirl_werner(const DensityMatrix& rho2) {
  return WernerState((4.0 * singlet_fidelity(rho2) - 1.0) / 3.0);
}

AnyState named_state(const std::string& name, int qubit_count, std::uint64_t seed) {
  const auto require = [&](bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(std::string("named_state '") + name + "': " + what);
  };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  if (name == "singlet") {
    require(qubit_count == 2, "needs exactly 2 qubits");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(1) = inv_sqrt2;   // |01>
    psi(2) = -inv_sqrt2;  // |10>
    return PureState(std::move(psi));
  }
  if (name == "ghz") {
    require(qubit_count >= 2 && qubit_count <= kMaxPureQubits, "needs 2..20 qubits");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubit_count);
    psi(0) = inv_sqrt2;
    psi(psi.size() - 1) = inv_sqrt2;
    return PureState(std::move(psi));
  }
  if (name == "w") {
    require(qubit_count >= 2 && qubit_count <= kMaxPureQubits, "needs 2..20 qubits");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubit_count);
    const double amp = 1.0 / std::sqrt(static_cast<double>(qubit_count));
    for (int q = 0; q < qubit_count; ++q) {
      psi(Eigen::Index{1} << (qubit_count - 1 - q)) = amp;
    }
    return PureState(std::move(psi));
  }
  if (name == "zero" || name == "product") {
    require(qubit_count >= 1 && qubit_count <= kMaxPureQubits, "needs 1..20 qubits");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubit_count);
    psi(0) = 1.0;
    return PureState(std::move(psi));
  }
  if (name == "max_mixed") {
    require(qubit_count >= 1 && qubit_count <= kMaxDenseQubits, "needs 1..12 qubits");
    const Eigen::Index dim = Eigen::Index{1} << qubit_count;
    return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
  }
  if (name == "singlet_cover") {
    require(qubit_count >= 2 && qubit_count % 2 == 0 && qubit_count <= kMaxPureQubits,
            "needs an even qubit count");
    const PureState pair = std::get<PureState>(named_state("singlet", 2));
    Eigen::VectorXcd psi = pair.amplitudes();
    for (int p = 1; p < qubit_count / 2; ++p) {
      Eigen::VectorXcd next(psi.size() * 4);
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) next(i * 4 + j) = psi(i) * pair.amplitudes()(j);
      }
      psi.swap(next);
    }
    return PureState(std::move(psi));
  }
  if (name == "random_pure") {
    require(qubit_count >= 1 && qubit_count <= kMaxPureQubits, "needs 1..20 qubits");
    Rng rng(seed);
    return PureState(rng.haar_vector(1 << qubit_count));
  }
  if (name == "random_mixed") {
    require(qubit_count >= 1 && qubit_count <= kMaxDenseQubits, "needs 1..12 qubits");
    Rng rng(seed);
    const int dim = 1 << qubit_count;
    return DensityMatrix(rng.ginibre_density(dim, dim));
  }
  throw std::invalid_argument("named_state: unknown name '" + name +
                              "' (singlet, ghz, w, zero, product, max_mixed, singlet_cover, "
                              "random_pure, random_mixed)");
}

namespace {

// Phase picked up when the string maps |basis> to |basis ^ mask>.
Complex pauli_column_phase(const PauliString& p, Eigen::Index basis) {
  Complex phase = 1.0;
  const int n = p.qubit_count();
  for (int q = 0; q < n; ++q) {
    const int bit = qubit_bit(basis, n, q);
    switch (p.label(q)) {
      case Pauli::I:
      case Pauli::X:
        break;
      case Pauli::Y:
        phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        break;
      case Pauli::Z:
        if (bit) phase = -phase;
        break;
    }
  }
  return phase;
}

Eigen::Index pauli_flip_mask(const PauliString& p) {
  Eigen::Index mask = 0;
  const int n = p.qubit_count();
  for (int q = 0; q < n; ++q) {
    if (p.label(q) == Pauli::X || p.label(q) == Pauli::Y) mask |= qubit_mask(n, q);
  }
  return mask;
}

}  // namespace

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (p.qubit_count() != rho.qubit_count()) {
    throw std::invalid_argument("expectation: qubit count mismatch");
  }
  const Eigen::Index mask = pauli_flip_mask(p);
  Complex sum = 0.0;
  const auto& m = rho.matrix();
  for (Eigen::Index c = 0; c < rho.dim(); ++c) {
    sum += pauli_column_phase(p, c) * m(c, c ^ mask);
  }
  return sum.real();
}

double expectation(const PureState& psi, const PauliString& p) {
  if (p.qubit_count() != psi.qubit_count()) {
    throw std::invalid_argument("expectation: qubit count mismatch");
  }
  const Eigen::Index mask = pauli_flip_mask(p);
  Complex sum = 0.0;
  const auto& amps = psi.amplitudes();
  for (Eigen::Index c = 0; c < psi.dim(); ++c) {
    sum += pauli_column_phase(p, c) * std::conj(amps(c ^ mask)) * amps(c);
  }
  return sum.real();
}

Complex expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
    throw std::invalid_argument("expectation: operator dimension mismatch");
  }
  return (op * rho.matrix()).trace();
}

namespace {

template <typename Lookup>
Complex two_site_expectation_impl(int n, Eigen::Index dim, int q1, int q2,
                                  const Eigen::Matrix4cd& op, Lookup&& value) {
  if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n || q2 >= n) {
    throw std::invalid_argument("two_site_expectation: bad qubit pair");
  }
  const Eigen::Index m1 = qubit_mask(n, q1);
  const Eigen::Index m2 = qubit_mask(n, q2);
  const Eigen::Index both = m1 | m2;
  Complex sum = 0.0;
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & both) continue;
    for (int r = 0; r < 4; ++r) {
      const Eigen::Index row = base | ((r >> 1) ? m1 : 0) | ((r & 1) ? m2 : 0);
      for (int c = 0; c < 4; ++c) {
        const Eigen::Index col = base | ((c >> 1) ? m1 : 0) | ((c & 1) ? m2 : 0);
        sum += op(r, c) * value(row, col);
      }
    }
  }
  return sum;
}

}  // namespace

Complex two_site_expectation(const DensityMatrix& rho, int q1, int q2,
                             const Eigen::Matrix4cd& op) {
  const auto& m = rho.matrix();
  // Tr(O rho) = sum O[row,col] rho[col,row].
  return two_site_expectation_impl(rho.qubit_count(), rho.dim(), q1, q2, op,
                                   [&](Eigen::Index row, Eigen::Index col) { return m(col, row); });
}

Complex two_site_expectation(const PureState& psi, int q1, int q2, const Eigen::Matrix4cd& op) {
  const auto& amps = psi.amplitudes();
  return two_site_expectation_impl(
      psi.qubit_count(), psi.dim(), q1, q2, op,
      [&](Eigen::Index row, Eigen::Index col) { return std::conj(amps(row)) * amps(col); });
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd embed_one_site(int qubit_count, int q, const Eigen::Matrix2cd& op) {
  if (q < 0 || q >= qubit_count) {
    throw std::invalid_argument("embed_one_site: qubit out of range");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < qubit_count; ++i) {
    out = (i == q) ? kron(out, op) : kron(out, Eigen::Matrix2cd::Identity());
  }
  return out;
}

}  // namespace macrobell
