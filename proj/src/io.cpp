#include "polyveil/io.hpp"

#include <charconv>
#include <fstream>

namespace polyveil {

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const CsvTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << csv_escape(table.header[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_escape(row[i]);
    out << '\n';
  }
}

void write_csv_file(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(table, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable to_csv(const DpTable& table) {
  CsvTable csv;
  csv.header = table.header;
  for (const auto& row : table.rows) {
    std::vector<std::string> out;
    out.reserve(row.size());
    for (double v : row) out.push_back(format_double(v));
    csv.rows.push_back(std::move(out));
  }
  return csv;
}

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"m", a.rows()}, {"rows", std::move(rows)}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.contains("m") || !j.contains("rows"))
    throw std::invalid_argument("matrix json: need fields m and rows");
  const int m = j.at("m").get<int>();
  const auto& rows = j.at("rows");
  if (m < 1 || static_cast<int>(rows.size()) != m)
    throw std::invalid_argument("matrix json: row count does not match m");
  Matrix a(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("matrix json: ragged rows");
    for (int k = 0; k < m; ++k) a(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return a;
}

namespace {

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

}  // namespace

Json transcript_to_json(const Transcript& t) {
  Json j;
  j["params"] = {{"variant", to_string(t.params.variant)},
                 {"n", t.params.n},
                 {"k", t.params.k},
                 {"K", t.params.K},
                 {"alpha_star", t.params.alpha_star}};
  j["recovered_S"] = t.recovered_S;
  j["ground_truth_S"] = t.ground_truth_S;
  j["rounding_margin"] = t.rounding_margin;
  if (t.legacy_server) {
    Json v;
    v["f"] = t.legacy_server->f;
    v["shuffled_eta"] = t.legacy_server->shuffled_eta;
    if (!t.legacy_server->submitted.empty())
      v["submitted"] = matrices_to_json(t.legacy_server->submitted);
    j["server_view"] = std::move(v);
  }
  if (t.server) j["server_view"] = {{"F", t.server->F}, {"H", t.server->H}};
  if (t.aggregator) {
    Json v;
    if (!t.aggregator->masked.empty()) v["masked"] = matrices_to_json(t.aggregator->masked);
    if (!t.aggregator->f.empty()) v["f"] = t.aggregator->f;
    j["aggregator_view"] = std::move(v);
  }
  if (t.noise_aggregator) {
    Json v;
    v["eta"] = t.noise_aggregator->eta;
    if (!t.noise_aggregator->decoy_sum.empty())
      v["decoy_sum"] = matrices_to_json(t.noise_aggregator->decoy_sum);
    j["noise_aggregator_view"] = std::move(v);
  }
  return j;
}

namespace {

Permutation permutation_from_one_based(const Json& j) {
  std::vector<int> map;
  for (const auto& v : j) map.push_back(v.get<int>() - 1);
  return Permutation(std::move(map));
}

}  // namespace

RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  if (j.contains("bits")) {
    for (const auto& row : j.at("bits")) {
      std::vector<std::uint8_t> bits;
      for (const auto& b : row) bits.push_back(static_cast<std::uint8_t>(b.get<int>()));
      cfg.bits.emplace_back(std::move(bits));
    }
  }
  if (j.contains("decoys")) {
    for (const auto& client : j.at("decoys")) {
      std::vector<Permutation> perms;
      for (const auto& p : client) perms.push_back(permutation_from_one_based(p));
      cfg.fixture.decoys.push_back(std::move(perms));
    }
  }
  if (j.contains("coefficients")) {
    for (const auto& client : j.at("coefficients"))
      cfg.fixture.coefficients.push_back(client.get<std::vector<double>>());
  }
  if (j.contains("shuffle")) cfg.fixture.shuffle = permutation_from_one_based(j.at("shuffle"));
  return cfg;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  Json j;
  in >> j;
  return j;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace polyveil
