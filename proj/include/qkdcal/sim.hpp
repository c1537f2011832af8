#pragma once

#include <array>
#include <cstdint>

#include "qkdcal/calibration.hpp"
#include "qkdcal/qubit.hpp"

namespace qkdcal {

// One BB84 measurement-stage run: both parties draw a basis uniformly each
// round and record dichotomic outcomes sampled from the state.
struct SimConfig {
    TwoQubitState state;
    std::array<MeasurementModel, 2> alice{MeasurementModel::sharp(Vec3::z_axis()),
                                          MeasurementModel::sharp(Vec3::x_axis())};
    std::array<MeasurementModel, 2> bob{MeasurementModel::sharp(Vec3::z_axis()),
                                        MeasurementModel::sharp(Vec3::x_axis())};
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::domain_error on violation
};

// Finite-statistics estimate of the data matrix. Basis-pair cells with no
// rounds are NaN ("undefined"); downstream rate computation rejects those.
struct EstimatedDataMatrix {
    DataMatrix d;
    std::array<std::array<std::uint64_t, 2>, 2> counts{};
    Mat3 stderr_est{};

    bool has_undefined() const;
};

// Monte Carlo estimate. Deterministic for a fixed config: rounds are split
// into fixed-size blocks whose random streams derive from (seed, block), so
// the result does not depend on evaluation order.
EstimatedDataMatrix run(const SimConfig& config);

// Infinite-statistics limit: the data matrix of exact expectation values.
DataMatrix exact_data(const SimConfig& config);

}  // namespace qkdcal
