#include "codeclag/errors.hpp"

namespace codeclag {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::DegenerateResponse: return "DegenerateResponse";
        case ErrorKind::DegenerateConditioning: return "DegenerateConditioning";
        case ErrorKind::DegenerateSeries: return "DegenerateSeries";
        case ErrorKind::NumericallySingular: return "NumericallySingular";
        case ErrorKind::Diverged: return "Diverged";
        case ErrorKind::MissingColumn: return "MissingColumn";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::CorruptDataset: return "CorruptDataset";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> location)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      location_(location) {}

bool Error::is_degenerate() const noexcept {
    return kind_ == ErrorKind::DegenerateResponse || kind_ == ErrorKind::DegenerateConditioning ||
           kind_ == ErrorKind::DegenerateSeries || kind_ == ErrorKind::NumericallySingular;
}

}  // namespace codeclag
