#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "mvdeg/entropy.hpp"
#include "mvdeg/graph.hpp"
#include "mvdeg/signal.hpp"
#include "mvdeg/synth.hpp"

namespace mvdeg::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Signal CSV: header of channel names, then one row per time sample.
MultivariateSignal parse_signal_csv(std::istream& in, const std::string& source = "<stream>");
MultivariateSignal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(std::ostream& out, const MultivariateSignal& signal);
void write_signal_csv(const std::filesystem::path& path, const MultivariateSignal& signal);

// Station layout CSV: header `station_id,x,y`.
StationLayout parse_station_csv(std::istream& in, const std::string& source = "<stream>");
StationLayout read_station_csv(const std::filesystem::path& path);

// Graph JSON: {"n": int, "directed": bool, "weights": [[...], ...]}.
nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j, const std::string& source = "<json>");
WeightedGraph read_graph_json(const std::filesystem::path& path);
void write_graph_json(const std::filesystem::path& path, const WeightedGraph& g);

/// Correlation matrix JSON: either a bare array of arrays or {"corr": [[...]]}.
Eigen::MatrixXd read_correlation_json(const std::filesystem::path& path);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& source);

nlohmann::json generator_spec_to_json(const GeneratorSpec& spec);

// Curves: CSV `method,tau,mean,sd,n_realizations`; undefined scales carry the
// literal `undefined` in the mean and sd columns.
void write_curves_csv(std::ostream& out, const std::vector<EntropyCurve>& curves);
void write_curves_csv(const std::filesystem::path& path, const std::vector<EntropyCurve>& curves);
nlohmann::json curve_to_json(const EntropyCurve& curve);

/// Parses JSON text, turning syntax errors into ParseError with line/column.
nlohmann::json parse_json(std::istream& in, const std::string& source);
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace mvdeg::io
