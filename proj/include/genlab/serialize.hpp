#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "genlab/biasvariance.hpp"
#include "genlab/bounds.hpp"
#include "genlab/complexity.hpp"
#include "genlab/crossval.hpp"
#include "genlab/datagen.hpp"
#include "genlab/erm.hpp"
#include "genlab/experiments.hpp"
#include "genlab/hypotheses.hpp"

namespace genlab {

using json = nlohmann::json;

// Generators.
json to_json(const Generator& gen);
Generator generator_from_json(const json& j);

// Hypotheses: kind, architecture, flat parameter array in row-major layer order.
json to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const json& j);

json to_json(const TrainerConfig& cfg);
TrainerConfig trainer_from_json(const json& j);

// Results.
json to_json(const ComplexityEstimate& est);   // includes a 20-bin correlation histogram
json to_json(const BoundReport& report);
json to_json(const BVDecomposition& bv);
json to_json(const CVResult& res);
json to_json(const RandomizationReport& report);

/// One-line human-readable bound summary with the vacuity flag.
std::string bound_summary_line(const BoundReport& report);

/// Rendered text table of a randomization report.
std::string randomization_table(const RandomizationReport& report);

// Dataset CSV: header x1,...,xp,y; shortest round-trip decimals.
void dataset_to_csv(const Dataset& ds, std::ostream& out);
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::istream& in, bool classification);
Dataset dataset_from_csv_string(const std::string& text, bool classification);

/// CSV with the sweep columns: lambda, bias_sq, variance, noise, sum,
/// aesl_direct, stderr.
std::string bv_sweep_csv(const std::vector<std::pair<double, BVDecomposition>>& rows);

/// CSV with columns lambda, ael_hat, train_error, fold_1..fold_r.
std::string cv_csv(const CVResult& res);

/// Fit trace CSV: epoch, train_objective, validation_error.
std::string trace_csv(const std::vector<TracePoint>& trace);

/// Memorization curve CSV: k, train_error.
std::string memorization_csv(const std::vector<std::pair<long long, double>>& rows);

/// Serialize a double the way every writer here does (shortest round-trip).
std::string csv_field(double v);

}  // namespace genlab
