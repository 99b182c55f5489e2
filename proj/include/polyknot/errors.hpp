#pragma once

#include <stdexcept>
#include <string>

namespace polyknot {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AntiParallelEdges : DomainError {
    using DomainError::DomainError;
};

struct NotEmbedded : DomainError {
    using DomainError::DomainError;
};

struct NotEquilateral : DomainError {
    using DomainError::DomainError;
};

struct RadiusExceedsMinRad : DomainError {
    using DomainError::DomainError;
};

struct DegenerateProjection : DomainError {
    using DomainError::DomainError;
};

struct TooManyCrossings : DomainError {
    using DomainError::DomainError;
};

struct ProjectionFailure : DomainError {
    using DomainError::DomainError;
};

struct FitDiverged : DomainError {
    using DomainError::DomainError;
};

struct InsufficientData : DomainError {
    using DomainError::DomainError;
};

struct NonMonotoneSeries : DomainError {
    using DomainError::DomainError;
};

struct DegenerateX : DomainError {
    using DomainError::DomainError;
};

}  // namespace polyknot
