#include "incompat/json_io.hpp"

#include <string>

#include "incompat/errors.hpp"

namespace incompat::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractError(std::string("JSON: missing field \"") + key + "\"");
  }
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ContractError(std::string("JSON: \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<ComplexMatrix> matrices_from_json(const Json& j, const char* key) {
  const Json& arr = field(j, key);
  if (!arr.is_array()) throw ContractError(std::string("JSON: \"") + key + "\" must be an array");
  std::vector<ComplexMatrix> out;
  for (const auto& m : arr) out.push_back(matrix_from_json(m));
  return out;
}

Json matrices_to_json(const std::vector<ComplexMatrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(to_json(m));
  return arr;
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const int rows = int_field(j, "rows");
  const int cols = int_field(j, "cols");
  if (rows < 1 || cols < 1) throw DimensionError("JSON: matrix dimensions must be positive");
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<int>(data.size()) != rows * cols) {
    throw DimensionError("JSON: matrix data length differs from rows * cols");
  }
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Json& e = data[r * cols + c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ContractError("JSON: matrix entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

Json to_json(const Povm& m) {
  Json j;
  j["dim"] = m.dim();
  j["elements"] = matrices_to_json(m.elements());
  return j;
}

Povm povm_from_json(const Json& j) {
  return Povm(int_field(j, "dim"), matrices_from_json(j, "elements"));
}

Json to_json(const ChoiMatrix& c) {
  Json j;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  j["choi"] = to_json(c.matrix());
  return j;
}

ChoiMatrix channel_from_json(const Json& j) {
  if (j.is_object() && j.contains("kraus")) {
    ChoiMatrix c = choi_from_kraus(matrices_from_json(j, "kraus"));
    if ((j.contains("dim_in") && int_field(j, "dim_in") != c.dim_in()) ||
        (j.contains("dim_out") && int_field(j, "dim_out") != c.dim_out())) {
      throw DimensionError("JSON: Kraus operators do not match the declared dimensions");
    }
    return c;
  }
  return ChoiMatrix(int_field(j, "dim_in"), int_field(j, "dim_out"),
                    matrix_from_json(field(j, "choi")));
}

Json to_json(const Instrument& instr) {
  Json j;
  j["dim_in"] = instr.dim_in();
  j["dim_out"] = instr.dim_out();
  j["elements"] = matrices_to_json(instr.elements());
  return j;
}

Instrument instrument_from_json(const Json& j) {
  return Instrument(int_field(j, "dim_in"), int_field(j, "dim_out"), matrices_from_json(j, "elements"));
}

Json to_json(const JointChannel& joint) {
  Json j;
  j["dim_in"] = joint.dim_in();
  j["n"] = joint.n();
  j["dim_out_each"] = joint.dim_out_each();
  j["choi"] = to_json(joint.choi());
  return j;
}

Json to_json(const CompatibilityVerdict& v) {
  Json j;
  j["compatible"] = v.compatible;
  j["margin"] = v.margin;
  j["status"] = std::string(sdp::status_name(v.status));
  if (v.parent) {
    j["joint"] = Json{{"parent", matrices_to_json(*v.parent)}};
  } else if (v.joint) {
    j["joint"] = to_json(*v.joint);
  } else if (v.instrument) {
    j["joint"] = to_json(*v.instrument);
  } else {
    j["joint"] = nullptr;
  }
  return j;
}

Json to_json(const WitnessSet& w) {
  Json j;
  j["kind"] = std::string(kind_name(w.kind));
  j["value"] = w.value;
  j["A"] = matrices_to_json(w.a);
  if (w.b) j["B"] = to_json(*w.b);
  return j;
}

Json to_json(const RobustnessReport& r) {
  Json j;
  j["kind"] = std::string(kind_name(r.kind));
  j["robustness"] = r.primal_value;
  j["dual"] = r.dual_value;
  j["gap"] = r.gap;
  j["status"] = std::string(sdp::status_name(r.solution.status));
  j["iterations"] = r.solution.iterations;
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  Json noise;
  if (!r.noise_channels.empty()) {
    Json arr = Json::array();
    for (const auto& c : r.noise_channels) arr.push_back(to_json(c));
    noise["channels"] = std::move(arr);
  }
  if (!r.noise_povms.empty()) {
    Json arr = Json::array();
    for (const auto& p : r.noise_povms) arr.push_back(to_json(p));
    noise["povms"] = std::move(arr);
  }
  if (r.noise_pair_channel) noise["channel"] = to_json(*r.noise_pair_channel);
  j["noise"] = noise.is_null() ? Json::object() : noise;
  if (r.mixture_joint) j["mixture_joint"] = to_json(*r.mixture_joint);
  if (r.mixture_parent) j["mixture_joint"] = Json{{"parent", matrices_to_json(*r.mixture_parent)}};
  if (r.mixture_instrument) j["mixture_joint"] = to_json(*r.mixture_instrument);
  return j;
}

Json to_json(const DiscriminationGame& g) {
  Json j;
  j["assisted"] = g.assisted();
  j["dim"] = g.dim();
  j["prior"] = g.prior();
  Json ens = Json::array();
  for (const auto& e : g.ensembles()) {
    Json members = Json::array();
    for (const auto& ws : e) members.push_back(Json{{"p", ws.p}, {"state", to_json(ws.state)}});
    ens.push_back(std::move(members));
  }
  j["ensembles"] = std::move(ens);
  return j;
}

DiscriminationGame game_from_json(const Json& j) {
  const Json& assisted = field(j, "assisted");
  if (!assisted.is_boolean()) throw ContractError("JSON: \"assisted\" must be a boolean");
  const Json& prior = field(j, "prior");
  const Json& ens = field(j, "ensembles");
  if (!prior.is_array() || !ens.is_array()) throw ContractError("JSON: malformed game");
  std::vector<std::vector<WeightedState>> ensembles;
  for (const auto& e : ens) {
    std::vector<WeightedState> members;
    for (const auto& m : e) members.push_back({field(m, "p").get<double>(), matrix_from_json(field(m, "state"))});
    ensembles.push_back(std::move(members));
  }
  int dim = 0;
  if (j.contains("dim")) {
    dim = int_field(j, "dim");
  } else if (!ensembles.empty() && !ensembles.front().empty()) {
    const auto sd = static_cast<int>(ensembles.front().front().state.rows());
    dim = assisted.get<bool>() ? static_cast<int>(std::lround(std::sqrt(sd))) : sd;
  }
  return DiscriminationGame(assisted.get<bool>(), dim, prior.get<std::vector<double>>(),
                            std::move(ensembles));
}

Json to_json(const sdp::SolverOptions& opts) {
  Json j;
  j["feas_tol"] = opts.feas_tol;
  j["gap_tol"] = opts.gap_tol;
  j["max_iter"] = opts.max_iter;
  return j;
}

Json to_json(const sdp::SdpProblem& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks()) {
    blocks.push_back(Json{{"dim", b.dim}, {"kind", b.kind == sdp::BlockKind::kReal ? "real" : "complex"}});
  }
  Json cons = Json::array();
  for (const auto& c : p.constraints()) {
    Json entries = Json::array();
    for (const auto& e : c.entries) {
      entries.push_back(Json{e.block, e.row, e.col, e.value.real(), e.value.imag()});
    }
    cons.push_back(Json{{"rhs", c.rhs}, {"entries", std::move(entries)}});
  }
  Json j;
  j["blocks"] = std::move(blocks);
  j["objective"] = matrices_to_json(p.objective());
  j["objective_offset"] = p.objective_offset;
  j["constraints"] = std::move(cons);
  return j;
}

}  // namespace incompat::io
