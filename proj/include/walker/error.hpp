#pragma once

#include <stdexcept>
#include <string>

namespace walker {

enum class Errc {
    parse_error,
    underflow,
    label_not_below_beta,
    not_materialized,
    not_ancestor_closed,
    unknown_generator,
    invalid_presentation,
    presentation_mismatch,
    too_large,
    ambient_mismatch,
    not_limit_ordinal,
    resource_limit,
    height_too_low,
    not_in_socle,
    shape_mismatch,
    invalid_morphism,
    schema_error,
    infinite_ordinal,
};

inline const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::parse_error: return "ParseError";
    case Errc::underflow: return "Underflow";
    case Errc::label_not_below_beta: return "LabelNotBelowBeta";
    case Errc::not_materialized: return "NotMaterialized";
    case Errc::not_ancestor_closed: return "NotAncestorClosed";
    case Errc::unknown_generator: return "UnknownGenerator";
    case Errc::invalid_presentation: return "InvalidPresentation";
    case Errc::presentation_mismatch: return "PresentationMismatch";
    case Errc::too_large: return "TooLarge";
    case Errc::ambient_mismatch: return "AmbientMismatch";
    case Errc::not_limit_ordinal: return "NotLimitOrdinal";
    case Errc::resource_limit: return "ResourceLimit";
    case Errc::height_too_low: return "HeightTooLow";
    case Errc::not_in_socle: return "NotInSocle";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::invalid_morphism: return "InvalidMorphism";
    case Errc::schema_error: return "SchemaError";
    case Errc::infinite_ordinal: return "InfiniteOrdinal";
    }
    return "Unknown";
}

/// All library failures are reported through this one exception type; the
/// code identifies the contract that was violated.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

} // namespace walker
