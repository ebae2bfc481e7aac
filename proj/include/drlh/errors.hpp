#pragma once

#include <stdexcept>
#include <string>

namespace drlh {

// Base for every error raised by the library. Each concrete error names one
// failure mode so callers (and the CLI exit-code mapping) can dispatch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DRLH_DEFINE_ERROR(Name)                              \
    class Name : public Error {                              \
    public:                                                  \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// galois_bch
DRLH_DEFINE_ERROR(DesignedDistanceTooLarge);
DRLH_DEFINE_ERROR(TooManyClasses);
DRLH_DEFINE_ERROR(InvalidArgument);

// hamming_core
DRLH_DEFINE_ERROR(WidthMismatch);
DRLH_DEFINE_ERROR(IndexOutOfRange);
DRLH_DEFINE_ERROR(EmptyLabelSet);
DRLH_DEFINE_ERROR(NoNegativeClasses);

// environment
DRLH_DEFINE_ERROR(DimensionMismatch);
DRLH_DEFINE_ERROR(EpisodeAlreadyDone);
DRLH_DEFINE_ERROR(ActionOutOfRange);

// qnetwork
DRLH_DEFINE_ERROR(BadArchitecture);
DRLH_DEFINE_ERROR(StaleCache);
DRLH_DEFINE_ERROR(ShapeMismatch);
DRLH_DEFINE_ERROR(CorruptModelFile);
DRLH_DEFINE_ERROR(ArchitectureMismatch);

// data_eval and file formats
DRLH_DEFINE_ERROR(BadMagic);
DRLH_DEFINE_ERROR(HeaderMismatch);
DRLH_DEFINE_ERROR(EmptyLabelLine);
DRLH_DEFINE_ERROR(FormatError);
DRLH_DEFINE_ERROR(IoError);
DRLH_DEFINE_ERROR(ConfigError);

#undef DRLH_DEFINE_ERROR

}  // namespace drlh
