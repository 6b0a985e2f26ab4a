// Error taxonomy shared by every module. Each kind maps one-to-one onto a
// failure mode callers are expected to distinguish.

#pragma once

#include <stdexcept>
#include <string>

namespace qlg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeError : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct StateError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct SampleSizeError : Error {
    using Error::Error;
};
struct PostSelectError : Error {
    using Error::Error;
};
struct UnsupportedModeError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct LengthError : Error {
    using Error::Error;
};
struct ConsistencyError : Error {
    using Error::Error;
};
struct VersionError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace qlg
