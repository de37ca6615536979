#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stackpnr {

enum class ErrorKind
{
    // netlist-io
    UnknownDirective,
    DuplicateDriver,
    LutTooWide,
    DanglingSignal,
    MalformedTruthTableRow,
    // arch-model
    MissingField,
    InvariantViolation,
    UnknownKey,
    OutOfGrid,
    // partitioner / placer
    TooFewVertices,
    SameTier,
    GridTooSmall,
    // router
    InvalidWidth,
    Unroutable,
    DisconnectedRrg,
    UnroutableAtMax,
    // timing
    CombinationalLoop,
    // report / flow
    StageMissing,
    MissingPrerequisite,
    ConfigError,
    MalformedFile,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what);

} // namespace stackpnr
