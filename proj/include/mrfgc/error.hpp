#pragma once

#include <stdexcept>
#include <string>

namespace mrfgc {

enum class ErrorKind {
    InvalidArgument,
    VertexOutOfRange,
    EdgeNotPresent,
    NotATree,
    InvalidLibrary,
    InvalidDecomposition,
    PreconditionViolated,
    NonCollapsible,
    BudgetExceeded,
    Infeasible,
    Parse,
    Semantic,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace mrfgc
