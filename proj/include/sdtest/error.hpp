#pragma once

#include <stdexcept>
#include <string>

namespace sdtest {

/// Base class for every error raised by the library. The `kind()` string is
/// stable and is what the CLI and the Python wrapper report.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SDTEST_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

SDTEST_DEFINE_ERROR(BadArgument);
SDTEST_DEFINE_ERROR(DegenerateSupport);
SDTEST_DEFINE_ERROR(NonPositivePrice);
SDTEST_DEFINE_ERROR(LengthMismatch);
SDTEST_DEFINE_ERROR(MissingSubsampleSize);
SDTEST_DEFINE_ERROR(ParseError);
SDTEST_DEFINE_ERROR(GroupArity);
SDTEST_DEFINE_ERROR(ConfigError);
SDTEST_DEFINE_ERROR(IoError);

#undef SDTEST_DEFINE_ERROR

}  // namespace sdtest
