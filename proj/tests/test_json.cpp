#include <gtest/gtest.h>

#include "incompat/errors.hpp"
#include "incompat/json_io.hpp"
#include "incompat/sampling.hpp"
#include "incompat/suites.hpp"

using namespace incompat;
using io::Json;

TEST(Json, MatrixRoundTripIsExact) {
  auto rng = sampling::trial_rng(70, 0);
  const ComplexMatrix m = sampling::ginibre(3, 2, rng);
  const Json j = io::to_json(m);
  EXPECT_EQ(j["rows"], 3);
  EXPECT_EQ(j["cols"], 2);
  const ComplexMatrix back = io::matrix_from_json(Json::parse(j.dump()));
  EXPECT_EQ(max_abs_diff(back, m), 0.0);
}

TEST(Json, QuantumObjectsRoundTrip) {
  auto rng = sampling::trial_rng(71, 0);
  const Povm p = sampling::random_povm(3, 3, rng);
  const Povm p2 = io::povm_from_json(Json::parse(io::to_json(p).dump()));
  ASSERT_EQ(p2.outcomes(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(max_abs_diff(p[i], p2[i]), 0.0);

  const ChoiMatrix c = sampling::random_channel(2, 3, rng);
  const ChoiMatrix c2 = io::channel_from_json(Json::parse(io::to_json(c).dump()));
  EXPECT_EQ(c2.dim_in(), 2);
  EXPECT_EQ(c2.dim_out(), 3);
  EXPECT_EQ(max_abs_diff(c.matrix(), c2.matrix()), 0.0);

  const Instrument in = sampling::random_instrument(2, 2, 2, rng);
  const Instrument in2 = io::instrument_from_json(Json::parse(io::to_json(in).dump()));
  EXPECT_EQ(max_abs_diff(in.elements()[1], in2.elements()[1]), 0.0);
}

TEST(Json, ChannelFromKraus) {
  // Amplitude damping with gamma = 0.3.
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(0.7);
  k1(0, 1) = std::sqrt(0.3);
  Json j;
  j["kraus"] = Json::array({io::to_json(k0), io::to_json(k1)});
  const ChoiMatrix c = io::channel_from_json(j);
  EXPECT_LT(max_abs_diff(c.matrix(), choi_from_kraus({k0, k1}).matrix()), 1e-15);
}

TEST(Json, GameRoundTrip) {
  const auto g = bb84_game();
  const auto g2 = io::game_from_json(Json::parse(io::to_json(g).dump()));
  EXPECT_EQ(g2.assisted(), g.assisted());
  EXPECT_EQ(g2.n(), 2);
  const Strategy s{{}, {suites::computational_povm(2), suites::fourier_povm(2)}};
  EXPECT_NEAR(success_prob(g2, s), 1.0, 1e-12);
}

TEST(Json, ReportsAreDeterministic) {
  const auto r1 = robustness_channels({identity_channel(2), identity_channel(2)});
  const auto r2 = robustness_channels({identity_channel(2), identity_channel(2)});
  const std::string a = io::to_json(r1).dump();
  EXPECT_EQ(a, io::to_json(r2).dump());
  const Json j = Json::parse(a);
  EXPECT_NEAR(j["robustness"].get<double>(), 1.0 / 3.0, 1e-6);
}

TEST(Json, MalformedInputsAreRejected) {
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "data": [[1, 0]]})")),
               DimensionError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1})")), ContractError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "data": [[1]]})")),
               ContractError);
  // A valid matrix that is not a POVM.
  Json bad;
  bad["dim"] = 2;
  bad["elements"] = Json::array({io::to_json(identity(2))});
  bad["elements"].push_back(io::to_json(identity(2)));
  EXPECT_THROW(io::povm_from_json(bad), ContractError);
  EXPECT_THROW(Json::parse("{\"rows\": 1,").dump(), Json::parse_error);
}
