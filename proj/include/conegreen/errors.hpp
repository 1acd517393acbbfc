#pragma once

#include <stdexcept>
#include <string>

namespace conegreen {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string &msg, int line_, int col_)
        : std::runtime_error(msg), line(line_), column(col_) {}
};

struct UnboundParameter : std::runtime_error {
    std::string name;
    explicit UnboundParameter(const std::string &name_)
        : std::runtime_error("unbound parameter: " + name_), name(name_) {}
};

struct NotFuchsType : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedExponentField : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateBasis : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit codes used by the CLI; see README.
enum class ExitCode : int {
    ok = 0,
    parse = 2,
    precondition = 3,
    unsupported_exponent_field = 4,
    verification = 5,
};

} // namespace conegreen
