#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace codeclag {

enum class ErrorKind {
    InvalidInput,
    InsufficientData,
    DegenerateResponse,
    DegenerateConditioning,
    DegenerateSeries,
    NumericallySingular,
    Diverged,
    MissingColumn,
    ParseError,
    TooShort,
    CorruptDataset,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above.
/// `location` holds the 1-based line number for ParseError and the 1-based
/// step index for Diverged.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::size_t> location = std::nullopt);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::optional<std::size_t> location() const noexcept { return location_; }

    /// True for the kinds that describe a degenerate (constant, collinear)
    /// input rather than a malformed one.
    [[nodiscard]] bool is_degenerate() const noexcept;

private:
    ErrorKind kind_;
    std::optional<std::size_t> location_;
};

}  // namespace codeclag
