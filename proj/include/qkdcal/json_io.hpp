#pragma once

#include <string>

#include "qkdcal/calibration.hpp"
#include "qkdcal/qubit.hpp"
#include "qkdcal/sim.hpp"

namespace qkdcal {

// {"d": [[...],[...],[...]]} with d[0][0] = 1. Parse errors raise io_error;
// an invalid matrix raises infeasible_error.
DataMatrix data_matrix_from_json(const std::string& text);
std::string data_matrix_to_json(const DataMatrix& d);

// DataMatrix object extended with "counts" (2x2) and "stderr" (3x3);
// undefined cells serialize as null.
std::string estimated_to_json(const EstimatedDataMatrix& e);

// {"rho": 4x4 array of [re, im] pairs}. Validates the parsed state.
TwoQubitState state_from_json(const std::string& text);

std::string read_file(const std::string& path);       // io_error on failure
void write_file(const std::string& path, const std::string& content);

}  // namespace qkdcal
