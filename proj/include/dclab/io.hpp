#pragma once
// Family documents (JSON), weight parsing and sweep CSV output.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "encoding_family.hpp"
#include "linalg.hpp"
#include "search.hpp"

namespace dclab {

inline constexpr int family_schema_version = 1;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

inline nlohmann::json family_to_json(const EncodingFamily& f) {
  nlohmann::json doc;
  doc["schema_version"] = family_schema_version;
  doc["d"] = f.dim();
  doc["label"] = f.label();
  doc["target_lambda0"] = f.target_lambda0() ? nlohmann::json(*f.target_lambda0()) : nlohmann::json(nullptr);
  auto members = nlohmann::json::array();
  for (const auto& u : f.members()) {
    auto entries = nlohmann::json::array();
    for (const cplx& z : u.matrix().entries()) entries.push_back({z.real(), z.imag()});
    members.push_back(std::move(entries));
  }
  doc["members"] = std::move(members);
  return doc;
}

inline std::string write_family(const EncodingFamily& f) { return family_to_json(f).dump(2) + "\n"; }

/// Reads a family document. Members must be unitary within `unitarity_tol`.
inline EncodingFamily family_from_json(const nlohmann::json& doc, double unitarity_tol = 1e-10) {
  try {
    if (!doc.is_object()) throw ParseError("family document must be a JSON object");
    const int version = doc.at("schema_version").get<int>();
    if (version != family_schema_version) {
      throw ParseError("unsupported schema_version " + std::to_string(version));
    }
    const auto d = doc.at("d").get<std::size_t>();
    if (d < 1) throw ParseError("d must be positive");
    const auto label = doc.value("label", std::string{});
    std::optional<double> target;
    if (doc.contains("target_lambda0") && !doc.at("target_lambda0").is_null()) {
      target = doc.at("target_lambda0").get<double>();
    }
    std::vector<UnitaryMatrix> members;
    for (const auto& m : doc.at("members")) {
      if (!m.is_array() || m.size() != d * d) {
        throw ParseError("member " + std::to_string(members.size()) + " must hold d*d = " + std::to_string(d * d) +
                         " entries");
      }
      std::vector<cplx> entries;
      entries.reserve(d * d);
      for (const auto& z : m) {
        if (!z.is_array() || z.size() != 2) throw ParseError("complex entries must be [re, im] pairs");
        entries.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
      try {
        members.emplace_back(ComplexMatrix(d, d, entries), unitarity_tol);
      } catch (const std::exception& e) {
        throw ParseError("member " + std::to_string(members.size()) + ": " + e.what());
      }
    }
    return EncodingFamily(d, std::move(members), label, target);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed family document: ") + e.what());
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
}

inline EncodingFamily read_family(std::string_view text, double unitarity_tol = 1e-10) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed family document: ") + e.what());
  }
  return family_from_json(doc, unitarity_tol);
}

inline EncodingFamily read_family_file(const std::string& path, double unitarity_tol = 1e-10) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_family(ss.str(), unitarity_tol);
}

/// Parses a weight written as a decimal ("0.6") or a ratio ("3/5").
inline double parse_weight(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) {
      throw ParseError("not a number: '" + std::string(text) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  const double v = slash == std::string_view::npos ? number(text)
                                                   : number(text.substr(0, slash)) / number(text.substr(slash + 1));
  if (!std::isfinite(v)) throw ParseError("weight is not finite: '" + std::string(text) + "'");
  return v;
}

inline std::vector<double> parse_weights(const std::vector<std::string>& items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(parse_weight(s));
  return out;
}

inline constexpr std::string_view sweep_csv_header =
    "lambda0,lambda1,lambda2,entropy_bits,wcsg_bound,n_max_estimate,best_objective_at_refusal,seed";

/// One row per cell; the refusal objective is empty when the scan stopped at a bound.
inline void write_sweep_csv(std::ostream& out, const RegionMap& map) {
  out << sweep_csv_header << '\n';
  for (const auto& c : map.cells) {
    out << format_double(c.lambdas.at(0)) << ',' << format_double(c.lambdas.at(1)) << ','
        << format_double(c.lambdas.at(2)) << ',' << format_double(c.entropy_bits) << ',' << c.wcsg_bound << ','
        << c.n_max_estimate << ',' << (c.best_objective_at_refusal ? format_double(*c.best_objective_at_refusal) : "")
        << ',' << c.seed << '\n';
  }
}

}  // namespace dclab
