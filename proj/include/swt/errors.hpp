#pragma once

#include <stdexcept>
#include <string>

namespace swt {

/// Invalid parameter values (bad alpha, beta out of range, ...). CLI exit 2.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Structurally incompatible inputs (mismatched atom sets, shape mismatch).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid configuration of a run (truncation tolerance unmet, path too
/// short, missing file). CLI exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data-dependent failure (zero wavelet coefficient, non-finite functional
/// value, degenerate sample). CLI exit 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An evaluation hit a genuine singularity, e.g. the mixed derivative of the
/// dependence function does not exist because u*f + v*g vanishes on an atom
/// that carries f*g != 0.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Diagnostics cannot be produced (too few usable points / lags).
struct DiagnosticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The hypotheses of the statement being verified fail on the given inputs.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace swt
