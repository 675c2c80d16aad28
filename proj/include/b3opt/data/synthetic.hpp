#pragma once

#include <cstdint>
#include <vector>

#include "b3opt/data/row.hpp"

namespace b3opt::data {

// Desk-scale stand-in for the real exchange data: draws pricing inputs over
// realistic ranges, prices them closed-form, and perturbs the market premium
// with truncated Gaussian noise. Deterministic per seed.
//
// S in [8, 45], K/S in [0.6, 1.5], tte in {30, 61, 91} days, sigma in
// [0.15, 0.9], r in [0.02, 0.15]; trade dates uniform over
// 2016-11-01 .. 2025-01-31 so the default split cutoff produces a test set.
std::vector<DatasetRow> generate_synthetic(size_t n, uint64_t seed, double noise_sd);

}  // namespace b3opt::data
