#pragma once

#include <string>
#include <vector>

#include "sparsetone/k_cluster.hpp"
#include "sparsetone/model.hpp"
#include "sparsetone/signal.hpp"

namespace sparsetone {

struct SignalFile {
  FourierSparseSignal signal;
  double T = 1.0;
  double F = 0.0;
};

// {"tones":[{"f":..,"re":..,"im":..}],"T":..,"F":..}
std::string signal_to_json(const FourierSparseSignal& sig, double T, double F);
SignalFile signal_from_json(const std::string& text);

std::string model_to_json(const MixedBasisModel& model);
MixedBasisModel model_from_json(const std::string& text);

std::string report_to_json(const RecoveryReport& rep);

// Strict parse: unknown keys are rejected. Missing keys keep defaults.
RecoveryConfig config_from_json(const std::string& text, const RecoveryConfig& base = {});
std::string config_to_json(const RecoveryConfig& cfg);

// columns t,re,im
std::string samples_to_csv(const std::vector<double>& ts, const std::vector<cplx>& vals);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sparsetone
