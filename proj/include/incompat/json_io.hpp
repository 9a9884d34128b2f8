#pragma once

// JSON encodings of matrices, quantum objects, games and reports.
//
// A matrix is {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major
// order; every other object is built from it. Objects use insertion-ordered
// keys so that output is byte-for-byte reproducible.

#include <json.hpp>

#include "incompat/compat.hpp"
#include "incompat/games.hpp"
#include "incompat/qobjects.hpp"
#include "incompat/robustness.hpp"
#include "incompat/sdp.hpp"

namespace incompat::io {

using Json = nlohmann::ordered_json;

Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const Povm& m);
Povm povm_from_json(const Json& j);

// {"dim_in", "dim_out", "choi"}; input may instead give {"kraus": [...]}.
Json to_json(const ChoiMatrix& c);
ChoiMatrix channel_from_json(const Json& j);

Json to_json(const Instrument& instr);
Instrument instrument_from_json(const Json& j);

Json to_json(const JointChannel& joint);

Json to_json(const CompatibilityVerdict& v);
Json to_json(const WitnessSet& w);
Json to_json(const RobustnessReport& r);

Json to_json(const DiscriminationGame& g);
DiscriminationGame game_from_json(const Json& j);

Json to_json(const sdp::SolverOptions& opts);
// Debug dump of a problem: blocks, objective, sparse constraints.
Json to_json(const sdp::SdpProblem& p);

}  // namespace incompat::io
