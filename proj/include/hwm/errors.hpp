#pragma once

#include <stdexcept>
#include <string>

namespace hwm {

/** Base class for all errors thrown by this library. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** A singular zero-mode multiplier was applied to a field with nonzero mean. */
class MeanNotZeroError : public Error {
public:
    explicit MeanNotZeroError(const std::string& msg) : Error(msg) {}
};

/** An operation received a parameter outside its admissible range. */
class ParameterOutOfRangeError : public Error {
public:
    explicit ParameterOutOfRangeError(const std::string& msg) : Error(msg) {}
};

/** An operation is only implemented for certain grid dimensions. */
class UnsupportedDimensionError : public Error {
public:
    explicit UnsupportedDimensionError(const std::string& msg) : Error(msg) {}
};

/** Kernel quadrature requires compactly supported data well inside the box. */
class SupportTooWideError : public Error {
public:
    explicit SupportTooWideError(const std::string& msg) : Error(msg) {}
};

/** A time step produced non-finite field values. */
class StepUnstableError : public Error {
public:
    explicit StepUnstableError(const std::string& msg) : Error(msg) {}
};

/** A trajectory-separation experiment started from coincident states. */
class DegenerateEnergyError : public Error {
public:
    explicit DegenerateEnergyError(const std::string& msg) : Error(msg) {}
};

/** Malformed configuration file or unknown configuration key. */
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace hwm
