#include "dga/error.hpp"

namespace dga {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::NonAscii: return "NonAscii";
        case Errc::NotHostname: return "NotHostname";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::BadGramLength: return "BadGramLength";
        case Errc::InsufficientText: return "InsufficientText";
        case Errc::CalibrationOverlap: return "CalibrationOverlap";
        case Errc::InvalidModel: return "InvalidModel";
        case Errc::ModelMissing: return "ModelMissing";
        case Errc::DegenerateData: return "DegenerateData";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::SchemaVersionMismatch: return "SchemaVersionMismatch";
        case Errc::CorruptDocument: return "CorruptDocument";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::EmptyClass: return "EmptyClass";
        case Errc::InsufficientSamples: return "InsufficientSamples";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace dga
