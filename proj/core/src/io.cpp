#include "macrobell/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace macrobell {

namespace {

using json = nlohmann::ordered_json;

json complex_pairs(const Eigen::MatrixXcd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return data;
}

Eigen::MatrixXcd matrix_from_pairs(const json& data, Eigen::Index rows, Eigen::Index cols,
                                   const std::string& where) {
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument(where + ": wrong number of complex pairs");
  }
  Eigen::MatrixXcd m(rows, cols);
  Eigen::Index i = 0;
  for (const auto& entry : data) {
    if (!entry.is_array() || entry.size() != 2) {
      throw std::invalid_argument(where + ": entries must be [re, im] pairs");
    }
    m(i / cols, i % cols) = Complex(entry[0].get<double>(), entry[1].get<double>());
    ++i;
  }
  return m;
}

json direction_to_json(const Direction& d) {
  return json::array({d.v.x(), d.v.y(), d.v.z()});
}

}  // namespace

std::string state_to_json(const AnyState& state) {
  json doc;
  doc["qubits"] = state_qubit_count(state);
  if (const auto* psi = std::get_if<PureState>(&state)) {
    doc["kind"] = "pure";
    doc["data"] = complex_pairs(psi->amplitudes());
  } else {
    doc["kind"] = "mixed";
    doc["data"] = complex_pairs(std::get<DensityMatrix>(state).matrix());
  }
  return doc.dump();
}

AnyState state_from_json(const std::string& text) {
  const json doc = json::parse(text);
  const int qubits = doc.at("qubits").get<int>();
  const std::string kind = doc.at("kind").get<std::string>();
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  if (kind == "pure") {
    const Eigen::MatrixXcd m = matrix_from_pairs(doc.at("data"), dim, 1, "state data");
    return PureState(Eigen::VectorXcd(m.col(0)));
  }
  if (kind == "mixed") {
    return DensityMatrix(matrix_from_pairs(doc.at("data"), dim, dim, "state data"));
  }
  throw std::invalid_argument("state kind must be 'pure' or 'mixed'");
}

void save_state(const std::string& path, const AnyState& state) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_state: cannot open " + path);
  out << state_to_json(state) << '\n';
}

AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_state: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return state_from_json(buffer.str());
}

std::string tensor_to_json(const CorrelationTensor& tensor) {
  json doc;
  doc["regions"] = tensor.region_count();
  doc["values"] = tensor.values;
  json frames = json::array();
  for (const auto& frame : tensor.frames) {
    json f;
    f["x"] = direction_to_json(frame.x_axis);
    f["y"] = direction_to_json(frame.y_axis);
    frames.push_back(std::move(f));
  }
  doc["frames"] = std::move(frames);
  return doc.dump();
}

std::string family_to_json(const OperatorFamily& family) {
  json doc;
  doc["region_sizes"] = family.region_sizes;
  json sequences = json::array();
  for (const auto& seq : family.sequences) {
    json record = json::array();
    for (std::size_t r = 0; r < seq.factors.size(); ++r) {
      json factor;
      factor["region"] = r + 1;
      factor["qubit"] = seq.factors[r].qubit_index;
      factor["pauli"] = seq.factors[r].pauli_index == 1 ? "X" : "Y";
      record.push_back(std::move(factor));
    }
    sequences.push_back(std::move(record));
  }
  doc["sequences"] = std::move(sequences);
  return doc.dump();
}

OperatorFamily family_from_json(const std::string& text) {
  const json doc = json::parse(text);
  OperatorFamily family;
  family.region_sizes = doc.at("region_sizes").get<std::vector<int>>();
  for (const auto& record : doc.at("sequences")) {
    OperatorSequence seq;
    seq.factors.resize(family.region_sizes.size());
    for (const auto& factor : record) {
      const int region = factor.at("region").get<int>();
      if (region < 1 || region > static_cast<int>(family.region_sizes.size())) {
        throw std::invalid_argument("family sequence has a region out of range");
      }
      const std::string pauli = factor.at("pauli").get<std::string>();
      if (pauli != "X" && pauli != "Y") {
        throw std::invalid_argument("family sequence pauli must be X or Y");
      }
      seq.factors[region - 1] =
          RegionFactor{factor.at("qubit").get<int>(), pauli == "X" ? 1 : 2};
    }
    family.sequences.push_back(std::move(seq));
  }
  return family;
}

std::string scenario_to_json(const BellScenario& scenario) {
  json doc;
  doc["regions"] = scenario.region_count();
  doc["local_dims"] = scenario.local_dims;
  doc["settings"] = scenario.settings;
  doc["outcomes"] = scenario.outcomes;
  json povms = json::array();
  for (const auto& region : scenario.povms) {
    json settings = json::array();
    for (const auto& setting : region) {
      json outcomes = json::array();
      for (const auto& e : setting) outcomes.push_back(complex_pairs(e));
      settings.push_back(std::move(outcomes));
    }
    povms.push_back(std::move(settings));
  }
  doc["povms"] = std::move(povms);
  return doc.dump();
}

BellScenario scenario_from_json(const std::string& text) {
  const json doc = json::parse(text);
  BellScenario scenario;
  scenario.local_dims = doc.at("local_dims").get<std::vector<int>>();
  scenario.settings = doc.at("settings").get<std::vector<int>>();
  scenario.outcomes = doc.at("outcomes").get<std::vector<int>>();
  const auto& povms = doc.at("povms");
  if (doc.at("regions").get<int>() != scenario.region_count() ||
      povms.size() != scenario.local_dims.size()) {
    throw std::invalid_argument("scenario region count is inconsistent");
  }
  for (int r = 0; r < scenario.region_count(); ++r) {
    const Eigen::Index d = scenario.local_dims[r];
    std::vector<std::vector<Eigen::MatrixXcd>> settings;
    for (const auto& setting : povms[r]) {
      std::vector<Eigen::MatrixXcd> outcomes;
      for (const auto& element : setting) {
        outcomes.push_back(matrix_from_pairs(element, d, d, "scenario povm"));
      }
      settings.push_back(std::move(outcomes));
    }
    scenario.povms.push_back(std::move(settings));
  }
  scenario.validate();
  return scenario;
}

namespace {

std::string factor_label(const RegionFactor& f) {
  std::ostringstream out;
  out << (f.pauli_index == 1 ? 'X' : 'Y') << '@' << f.qubit_index;
  return out.str();
}

// Groups sequences by their factor at `region` (first-appearance order) and
// recurses, file-tree style.
void render_branches(const OperatorFamily& family, const std::vector<int>& indices, int region,
                     const std::string& prefix, std::ostringstream& out) {
  if (region >= family.region_count()) return;
  std::vector<RegionFactor> order;
  for (int idx : indices) {
    const RegionFactor& f = family.sequences[idx].factors[region];
    if (std::find(order.begin(), order.end(), f) == order.end()) order.push_back(f);
  }
  for (std::size_t g = 0; g < order.size(); ++g) {
    std::vector<int> group;
    for (int idx : indices) {
      if (family.sequences[idx].factors[region] == order[g]) group.push_back(idx);
    }
    const bool last = (g + 1 == order.size());
    out << prefix << (last ? "`-- " : "|-- ") << factor_label(order[g]);
    if (region + 1 == family.region_count()) {
      out << "   [#" << group.front() << "]";
    }
    out << '\n';
    render_branches(family, group, region + 1,
                    prefix + (last ? "    " : "|   "), out);
  }
}

}  // namespace

std::string render_family_tree(const OperatorFamily& family) {
  std::ostringstream out;
  out << family.sequences.size() << " sequences over region sizes (";
  for (int r = 0; r < family.region_count(); ++r) {
    out << (r ? ", " : "") << family.region_sizes[r];
  }
  out << ")\n";
  std::vector<int> all(family.sequences.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  render_branches(family, all, 0, "", out);
  return out.str();
}

}  // namespace macrobell
