#include "sirs/error.hpp"

namespace sirs {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorKind::RowSumNonzero: return "RowSumNonzero";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::InitOutsideRegion: return "InitOutsideRegion";
    case ErrorKind::MissingLogChannel: return "MissingLogChannel";
    case ErrorKind::UnknownDelta: return "UnknownDelta";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

} // namespace sirs
