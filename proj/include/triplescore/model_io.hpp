#pragma once

#include <iosfwd>
#include <string>

#include "triplescore/scorers.hpp"

namespace ts {

// Versioned plain-text model files. First line:
//   triplescore-model <TAB> v1 <TAB> <kind>
// with kind one of frequency | paths | ensemble, then one line per
// feature "key <TAB> weight" in sorted feature order. Path model
// metadata travels in "!meta" lines before the features.

std::string read_model_kind(const std::string& path);

void save_path_model(const PathModel& m, std::ostream& out);
PathModel load_path_model(std::istream& in);

void save_frequency_calibration(const FrequencyCalibration& cal,
                                std::ostream& out);
FrequencyCalibration load_frequency_calibration(std::istream& in);

void save_ensemble_model(const EnsembleModel& m, std::ostream& out);
EnsembleModel load_ensemble_model(std::istream& in);

void save_path_model_file(const PathModel& m, const std::string& path);
PathModel load_path_model_file(const std::string& path);
void save_frequency_calibration_file(const FrequencyCalibration& cal,
                                     const std::string& path);
FrequencyCalibration load_frequency_calibration_file(const std::string& path);
void save_ensemble_model_file(const EnsembleModel& m,
                              const std::string& path);
EnsembleModel load_ensemble_model_file(const std::string& path);

}  // namespace ts
