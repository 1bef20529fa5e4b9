#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyveil/io.hpp"

#include <sstream>

using namespace polyveil;

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, 1.392e-10, 5.7466e9, -0.0, 13.1423, 1e308}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(4.0) == "4");
}

TEST_CASE("csv writing") {
  CsvTable t;
  t.header = {"a", "b"};
  std::ostringstream empty;
  write_csv(t, empty);
  CHECK(empty.str() == "a,b\n");

  t.rows.push_back({"1", "plain"});
  t.rows.push_back({"2", "needs,quote"});
  t.rows.push_back({"3", "has \"inner\""});
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str() == "a,b\n1,plain\n2,\"needs,quote\"\n3,\"has \"\"inner\"\"\"\n");

  t.rows.push_back({"short"});
  std::ostringstream bad;
  CHECK_THROWS_AS(write_csv(t, bad), std::invalid_argument);
}

TEST_CASE("byte-identical tables from identical queries") {
  DpQuery q;
  q.framework = DpFramework::Renyi;
  const DpTable a = dp_table(q, {2, 9, 100});
  const DpTable b = dp_table(q, {2, 9, 100});
  std::ostringstream sa, sb;
  write_csv(to_csv(a), sa);
  write_csv(to_csv(b), sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("matrix json round trip") {
  Matrix m(2, 2);
  m << 0.25, 0.75, 0.75, 0.25;
  const Json j = matrix_to_json(m);
  CHECK(j.at("m") == 2);
  const Matrix back = matrix_from_json(j);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  Json ragged = {{"m", 2}, {"rows", {{1.0, 0.0}, {1.0}}}};
  CHECK_THROWS_AS(matrix_from_json(ragged), std::invalid_argument);
}

TEST_CASE("run config parsing") {
  const Json j = {
      {"bits", {{1, 0}, {1, 1}, {0, 1}}},
      {"decoys", {{{3, 1, 4, 2}, {2, 1, 4, 3}}, {{4, 3, 2, 1}, {1, 2, 3, 4}}, {{2, 1, 3, 4}, {3, 4, 1, 2}}}},
      {"coefficients", {{0.5, 0.2}, {0.4, 0.3}, {0.35, 0.35}}},
      {"shuffle", {2, 3, 1}}};
  const RunConfig cfg = run_config_from_json(j);
  REQUIRE(cfg.bits.size() == 3);
  CHECK(cfg.bits[0][0] == 1);
  CHECK(cfg.bits[0][1] == 0);
  REQUIRE(cfg.fixture.decoys.size() == 3);
  CHECK(cfg.fixture.decoys[0][0] == Permutation({2, 0, 3, 1}));
  CHECK(cfg.fixture.coefficients[2][0] == 0.35);
  REQUIRE(cfg.fixture.shuffle.has_value());
  CHECK(*cfg.fixture.shuffle == Permutation({1, 2, 0}));
}

TEST_CASE("identical seed and inputs give byte-identical transcripts") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerFull;
  p.n = 3;
  p.k = 4;
  p.K = 3;
  p.alpha_star = 0.3;
  std::vector<BitVector> inputs(4, BitVector({1, 0, 1}));
  const Json a = transcript_to_json(run_protocol(inputs, p, 21));
  const Json b = transcript_to_json(run_protocol(inputs, p, 21));
  CHECK(a.dump() == b.dump());
  const Json c = transcript_to_json(run_protocol(inputs, p, 22));
  CHECK(a.dump() != c.dump());
}

TEST_CASE("transcript serialization separates the views") {
  ProtocolParams p;
  p.variant = Variant::TwoLayerCompressed;
  p.n = 2;
  p.k = 3;
  p.K = 2;
  p.alpha_star = 0.3;
  std::vector<BitVector> inputs{BitVector({1, 0}), BitVector({1, 1}), BitVector({0, 1})};
  const Transcript tr = run_protocol(inputs, p, 3);
  const Json j = transcript_to_json(tr);
  CHECK(j.at("recovered_S") == 4);
  REQUIRE(j.contains("server_view"));
  CHECK(j.at("server_view").size() == 2);  // exactly F and H
  CHECK(j.at("server_view").contains("F"));
  CHECK(j.at("server_view").contains("H"));
  CHECK_FALSE(j.at("aggregator_view").contains("eta"));
  CHECK_FALSE(j.at("noise_aggregator_view").contains("f"));
  CHECK_FALSE(j.at("noise_aggregator_view").contains("masked"));
}
