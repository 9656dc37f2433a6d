#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

/// A caller violated an operation's documented precondition.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Cut query asked for more mass than remains to the right of the start point.
struct InfeasibleCutError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A protocol broke the communication contract (duplicate sender in a round,
/// writing to a finished transcript, exceeding a declared query budget).
struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A crossing instance violated its input invariants.
struct MalformedInstanceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A cut handed to a reduction back-map lies outside the region the
/// reduction encodes.
struct ReductionContractError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace fairdiv
