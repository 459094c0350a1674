#include "macrobell/monogamy.hpp"

#include <array>
#include <stdexcept>

namespace macrobell {

double ExpectationVector::squared_norm() const {
  double sum = 0.0;
  for (double c : components) sum += c * c;
  return sum;
}

namespace {

template <typename State>
ExpectationVector expectation_vector_impl(const State& state, const OperatorFamily& family) {
  if (family.total_qubits() != state.qubit_count()) {
    throw std::invalid_argument("expectation_vector: family span does not match state");
  }
  ExpectationVector out;
  out.components.reserve(family.sequences.size());
  for (std::size_t i = 0; i < family.sequences.size(); ++i) {
    out.components.push_back(expectation(state, family.expand(static_cast<int>(i))));
  }
  return out;
}

template <typename State>
double pq_bound_impl(const State& state, const Partition& partition,
                     const std::vector<MeasurementFrame>& frames) {
  partition.validate(state.qubit_count());
  if (partition.region_count() != 2 || frames.size() != 2) {
    throw std::invalid_argument("pq_bound: two regions and two frames required");
  }

  std::vector<int> region_a = partition.regions[0];
  std::vector<int> region_b = partition.regions[1];
  MeasurementFrame frame_a = frames[0];
  MeasurementFrame frame_b = frames[1];
  if (region_b.size() < 2) {
    // The j <-> j+1 pairing needs two qubits on the second side.
    if (region_a.size() < 2) {
      throw std::invalid_argument("pq_bound: one region must contain at least 2 qubits");
    }
    std::swap(region_a, region_b);
    std::swap(frame_a, frame_b);
  }

  const std::size_t n_a = region_a.size();
  const std::size_t n_b = region_b.size();

  // Per-pair correlation tensors T_kl(i, j) in the x/y frame axes.
  std::array<Eigen::Matrix4cd, 4> pair_ops;
  for (int ka = 0; ka < 2; ++ka) {
    const Eigen::Matrix2cd obs_a = direction_observable(frame_a.axis(ka));
    for (int kb = 0; kb < 2; ++kb) {
      const Eigen::Matrix2cd obs_b = direction_observable(frame_b.axis(kb));
      pair_ops[ka * 2 + kb] = kron(obs_a, obs_b);
    }
  }
  // t[i][j][c] with c = (axis_a, axis_b) packed as 2*axis_a + axis_b.
  std::vector<std::array<double, 4>> t(n_a * n_b);
  for (std::size_t i = 0; i < n_a; ++i) {
    for (std::size_t j = 0; j < n_b; ++j) {
      for (int c = 0; c < 4; ++c) {
        t[i * n_b + j][c] =
            two_site_expectation(state, region_a[i], region_b[j], pair_ops[c]).real();
      }
    }
  }

  // P and Q mix the pairs (i, j) and (i, j+1 mod N_B).
  const auto p_vec = [&](std::size_t i, std::size_t j) {
    const std::size_t jn = (j + 1) % n_b;
    return std::array<double, 4>{t[i * n_b + j][0], t[i * n_b + j][1], t[i * n_b + jn][2],
                                 t[i * n_b + jn][3]};
  };
  const auto q_vec = [&](std::size_t i, std::size_t j) {
    const std::size_t jn = (j + 1) % n_b;
    return std::array<double, 4>{t[i * n_b + jn][0], t[i * n_b + jn][1], t[i * n_b + j][2],
                                 t[i * n_b + j][3]};
  };

  // Summing dot products pairwise is equivalent to squaring the component
  // sums; keep the explicit vector sums so the decomposition stays visible.
  std::array<double, 4> p_sum{};
  std::array<double, 4> q_sum{};
  for (std::size_t i = 0; i < n_a; ++i) {
    for (std::size_t j = 0; j < n_b; ++j) {
      const auto p = p_vec(i, j);
      const auto q = q_vec(i, j);
      for (int c = 0; c < 4; ++c) {
        p_sum[c] += p[c];
        q_sum[c] += q[c];
      }
    }
  }
  double l = 0.0;
  for (int c = 0; c < 4; ++c) l += p_sum[c] * p_sum[c] + q_sum[c] * q_sum[c];
  const double scale = static_cast<double>(n_a) * static_cast<double>(n_b);
  return l / (2.0 * scale * scale);
}

}  // namespace

ExpectationVector expectation_vector(const DensityMatrix& rho, const OperatorFamily& family) {
  return expectation_vector_impl(rho, family);
}

ExpectationVector expectation_vector(const PureState& psi, const OperatorFamily& family) {
  return expectation_vector_impl(psi, family);
}

double pq_bound(const DensityMatrix& rho, const Partition& partition,
                const std::vector<MeasurementFrame>& frames) {
  return pq_bound_impl(rho, partition, frames);
}

double pq_bound(const PureState& psi, const Partition& partition,
                const std::vector<MeasurementFrame>& frames) {
  return pq_bound_impl(psi, partition, frames);
}

VisibilityCap singlet_monogamy_cap(int region_a_size, int region_b_size) {
  if (region_a_size < 1 || region_b_size < 1) {
    throw std::invalid_argument("singlet_monogamy_cap: region sizes must be positive");
  }
  const double r = static_cast<double>(std::max(region_a_size, region_b_size));
  return VisibilityCap{(r + 2.0) / (3.0 * r), region_a_size, region_b_size};
}

WernerClassification werner_classify(double visibility, int region_a_size, int region_b_size) {
  if (visibility < kWernerVisibilityMin - kThresholdSlack ||
      visibility > 1.0 + kThresholdSlack) {
    throw std::invalid_argument("werner_classify: visibility outside Werner range [-1/3, 1]");
  }
  WernerClass cls;
  if (visibility <= kPovmLhvThreshold + kThresholdSlack) {
    cls = WernerClass::kNoPovmViolation;
  } else if (visibility <= kProjectiveLhvThreshold + kThresholdSlack) {
    cls = WernerClass::kNoProjectiveViolation;
  } else {
    cls = WernerClass::kUnconstrained;
  }
  const VisibilityCap cap = singlet_monogamy_cap(region_a_size, region_b_size);
  return WernerClassification{cls, visibility > cap.cap + kThresholdSlack, cap};
}

double max_effective_visibility(const DensityMatrix& rho, const Partition& partition) {
  if (partition.region_count() != 2) {
    throw std::invalid_argument("max_effective_visibility: two regions required");
  }
  return twirl_werner(effective_state(rho, partition)).visibility;
}

}  // namespace macrobell
