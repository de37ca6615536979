#include "stackpnr/error.hpp"

namespace stackpnr {

std::string_view error_kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::UnknownDirective:
        return "UnknownDirective";
    case ErrorKind::DuplicateDriver:
        return "DuplicateDriver";
    case ErrorKind::LutTooWide:
        return "LutTooWide";
    case ErrorKind::DanglingSignal:
        return "DanglingSignal";
    case ErrorKind::MalformedTruthTableRow:
        return "MalformedTruthTableRow";
    case ErrorKind::MissingField:
        return "MissingField";
    case ErrorKind::InvariantViolation:
        return "InvariantViolation";
    case ErrorKind::UnknownKey:
        return "UnknownKey";
    case ErrorKind::OutOfGrid:
        return "OutOfGrid";
    case ErrorKind::TooFewVertices:
        return "TooFewVertices";
    case ErrorKind::SameTier:
        return "SameTier";
    case ErrorKind::GridTooSmall:
        return "GridTooSmall";
    case ErrorKind::InvalidWidth:
        return "InvalidWidth";
    case ErrorKind::Unroutable:
        return "Unroutable";
    case ErrorKind::DisconnectedRrg:
        return "DisconnectedRrg";
    case ErrorKind::UnroutableAtMax:
        return "UnroutableAtMax";
    case ErrorKind::CombinationalLoop:
        return "CombinationalLoop";
    case ErrorKind::StageMissing:
        return "StageMissing";
    case ErrorKind::MissingPrerequisite:
        return "MissingPrerequisite";
    case ErrorKind::ConfigError:
        return "ConfigError";
    case ErrorKind::MalformedFile:
        return "MalformedFile";
    }
    return "Unknown";
}

void fail(ErrorKind kind, const std::string &what)
{
    throw Error(kind, std::string(error_kind_name(kind)) + ": " + what);
}

} // namespace stackpnr
