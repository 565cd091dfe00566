#pragma once

#include <stdexcept>
#include <string>

namespace dga {

enum class Errc {
    EmptyInput,
    NonAscii,
    NotHostname,
    EmptyCorpus,
    BadGramLength,
    InsufficientText,
    CalibrationOverlap,
    InvalidModel,
    ModelMissing,
    DegenerateData,
    ShapeMismatch,
    SchemaVersionMismatch,
    CorruptDocument,
    InvalidSpec,
    EmptyClass,
    InsufficientSamples,
    TooFewSamples,
    LengthMismatch,
    Io,
};

const char* to_string(Errc code) noexcept;

/// Every recoverable failure in the library is reported as an Error carrying
/// one of the codes above; the CLI maps them onto exit codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace dga
