#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sirs {

enum class ErrorKind {
    InvalidArgument,
    NegativeOffDiagonal,
    RowSumNonzero,
    NotIrreducible,
    SingularSystem,
    NonFiniteState,
    InitOutsideRegion,
    MissingLogChannel,
    UnknownDelta,
    DimensionMismatch,
    Config,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline void require(bool condition, const std::string& message,
                    ErrorKind kind = ErrorKind::InvalidArgument)
{
    if (!condition) {
        throw Error(kind, message);
    }
}

} // namespace sirs
