#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctrlframe {

enum class Errc {
    NotSquare,
    NotSymmetric,
    NonFinite,
    DimensionMismatch,
    InvalidArgument,
    TargetUnreachable,
    AllZeroFrame,
    NotSorted,
    LengthMismatch,
    MajorizationViolated,
    InfeasibleNorms,
    ZeroInputMap,
    NonSpanningStart,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::NotSquare: return "NotSquare";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NonFinite: return "NonFinite";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::TargetUnreachable: return "TargetUnreachable";
        case Errc::AllZeroFrame: return "AllZeroFrame";
        case Errc::NotSorted: return "NotSorted";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::MajorizationViolated: return "MajorizationViolated";
        case Errc::InfeasibleNorms: return "InfeasibleNorms";
        case Errc::ZeroInputMap: return "ZeroInputMap";
        case Errc::NonSpanningStart: return "NonSpanningStart";
    }
    return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ctrlframe
