#include "macrobell/correlations.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace macrobell {

int CorrelationTensor::region_count() const {
  return static_cast<int>(frames.size());
}

double CorrelationTensor::at(const std::vector<int>& axes) const {
  if (axes.size() != frames.size()) {
    throw std::invalid_argument("CorrelationTensor::at: axis count mismatch");
  }
  std::size_t flat = 0;
  for (int axis : axes) {
    if (axis != 0 && axis != 1) throw std::invalid_argument("CorrelationTensor::at: axis not 0/1");
    flat = flat * 2 + static_cast<std::size_t>(axis);
  }
  return values.at(flat);
}

CorrelationTensor correlation_tensor(const DensityMatrix& rho_eff,
                                     const std::vector<MeasurementFrame>& frames) {
  const int k = rho_eff.qubit_count();
  if (static_cast<int>(frames.size()) != k) {
    throw std::invalid_argument("correlation_tensor: one frame per region required");
  }
  std::vector<Eigen::Matrix2cd> axis_obs(2 * k);
  for (int r = 0; r < k; ++r) {
    axis_obs[2 * r + 0] = direction_observable(frames[r].x_axis);
    axis_obs[2 * r + 1] = direction_observable(frames[r].y_axis);
  }

  CorrelationTensor tensor;
  tensor.frames = frames;
  const std::size_t entries = std::size_t{1} << k;
  tensor.values.resize(entries);
  for (std::size_t idx = 0; idx < entries; ++idx) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
    for (int r = 0; r < k; ++r) {
      const int axis = static_cast<int>((idx >> (k - 1 - r)) & 1);
      op = kron(op, axis_obs[2 * r + axis]);
    }
    tensor.values[idx] = expectation(rho_eff, op).real();
  }
  return tensor;
}

double zb_value(const CorrelationTensor& tensor) {
  double sum = 0.0;
  for (double t : tensor.values) sum += t * t;
  return sum;
}

bool zb_admits_lhv(const CorrelationTensor& tensor) {
  return zb_value(tensor) <= 1.0 + kZbTol;
}

namespace {

template <typename State>
MagnetizationCorrelation magnetization_correlation_impl(const State& state,
                                                        const Partition& partition,
                                                        const Direction& a, const Direction& b) {
  partition.validate(state.qubit_count());
  if (partition.region_count() != 2) {
    throw std::invalid_argument("magnetization_correlation: exactly two regions required");
  }
  const auto& region_a = partition.regions[0];
  const auto& region_b = partition.regions[1];
  const double n_a = static_cast<double>(region_a.size());
  const double n_b = static_cast<double>(region_b.size());

  const Eigen::Matrix2cd obs_a = direction_observable(a);
  const Eigen::Matrix2cd obs_b = direction_observable(b);
  const Eigen::Matrix4cd pair_op = kron(obs_a, obs_b);

  // Pairwise route over the full state.
  double pairwise = 0.0;
  for (int i : region_a) {
    for (int j : region_b) {
      pairwise += two_site_expectation(state, i, j, pair_op).real();
    }
  }

  // Effective-state route.
  const DensityMatrix rho_eff = effective_state(state, partition);
  const double via_eff = n_a * n_b * expectation(rho_eff, Eigen::MatrixXcd(pair_op)).real();

  if (std::abs(pairwise - via_eff) > 1e-9) {
    std::ostringstream msg;
    msg << "magnetization_correlation: internal fault, pairwise route " << pairwise
        << " disagrees with effective-state route " << via_eff;
    throw std::runtime_error(msg.str());
  }
  return MagnetizationCorrelation{
      via_eff, {static_cast<int>(region_a.size()), static_cast<int>(region_b.size())}};
}

}  // namespace

MagnetizationCorrelation magnetization_correlation(const DensityMatrix& rho,
                                                   const Partition& partition,
                                                   const Direction& a, const Direction& b) {
  return magnetization_correlation_impl(rho, partition, a, b);
}

MagnetizationCorrelation magnetization_correlation(const PureState& psi,
                                                   const Partition& partition,
                                                   const Direction& a, const Direction& b) {
  return magnetization_correlation_impl(psi, partition, a, b);
}

BellCoefficients chsh_coefficients() {
  BellCoefficients c;
  c.weights[{0, 0}] = 1.0;
  c.weights[{0, 1}] = 1.0;
  c.weights[{1, 0}] = 1.0;
  c.weights[{1, 1}] = -1.0;
  return c;
}

double macroscopic_bell_parameter(
    const BellCoefficients& coefficients,
    const std::map<std::pair<int, int>, MagnetizationCorrelation>& correlations) {
  double sum = 0.0;
  for (const auto& [settings, weight] : coefficients.weights) {
    const auto it = correlations.find(settings);
    if (it == correlations.end()) {
      std::ostringstream msg;
      msg << "macroscopic_bell_parameter: missing correlation for setting pair ("
          << settings.first << ", " << settings.second << ")";
      throw std::invalid_argument(msg.str());
    }
    sum += weight * it->second.value;
  }
  return sum;
}

}  // namespace macrobell
