#pragma once

#include <span>

namespace hqtcn {

double mse(std::span<const double> pred, std::span<const double> target);

// Rank-based AUROC (Mann-Whitney with ties counted one half). Labels are
// 0/1; both classes must be present.
double auroc(std::span<const double> scores, std::span<const int> labels);

} // namespace hqtcn
