#pragma once

#include <stdexcept>

namespace gbox {

/// Box edge below the minimum length floor (covariance would be singular).
struct DegenerateBox : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Covariance matrix is not symmetric positive definite.
struct NonSpd : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operation requires axis-aligned boxes (theta == 0 mod pi).
struct NotHorizontal : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Offset encodings use different angle encodings.
struct ModeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Predicted heading vector has (near-)zero magnitude.
struct ZeroHeading : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Gradient-descent fit produced a non-finite loss.
struct DivergedFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gbox
