#ifndef SPARROW_CORE_ERRORS_HPP
#define SPARROW_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sparrow {

/// Error categories; the C API maps these one-to-one onto status codes.
enum class ErrorCode {
    InvalidArgument = 1, // bad parameter or config invariant violation
    WidthMismatch = 2,   // bit-string width contract violation
    Range = 3,           // numeric parameter out of documented range
    Unsatisfiable = 4,   // construction failed within its search budget
    Infeasible = 5,      // run rejected as infeasible (cost, saturation)
    Unsupported = 6,     // valid request outside the implemented envelope
    Io = 7,              // file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace sparrow

#endif
