#pragma once

#include <stdexcept>
#include <string>

namespace hqtcn {

// Bad run configuration: unknown config keys, out-of-range settings.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or undersized input data: ragged CSV, short sequences.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Optimization failure: non-finite loss or gradient mid-run.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hqtcn
