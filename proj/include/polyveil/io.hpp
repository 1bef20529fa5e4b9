#ifndef POLYVEIL_IO_HPP
#define POLYVEIL_IO_HPP

#include "polyveil/dp.hpp"
#include "polyveil/protocol.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace polyveil {

using Json = nlohmann::json;

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 output: quoted where needed, LF line endings, header row first.
void write_csv(const CsvTable& table, std::ostream& out);
void write_csv_file(const CsvTable& table, const std::string& path);

CsvTable to_csv(const DpTable& table);

/// Matrices travel as {"m": <size>, "rows": [[...], ...]} with row-major
/// rows.
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

Json transcript_to_json(const Transcript& t);

/// Fixture block of a run config: explicit bits, decoy permutations as
/// 1-based index maps, coefficients, and optionally the shuffle order.
struct RunConfig {
  std::vector<BitVector> bits;
  ProtocolFixture fixture;
};

RunConfig run_config_from_json(const Json& j);
Json load_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace polyveil

#endif  // POLYVEIL_IO_HPP
