#pragma once

#include <stdexcept>
#include <string>

namespace ellfrob {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define ELLFROB_ERROR(Name)                                                    \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    };

ELLFROB_ERROR(NonConvergence)
ELLFROB_ERROR(UnsupportedOrder)
ELLFROB_ERROR(PoleTooClose)
ELLFROB_ERROR(UnknownIdentity)
ELLFROB_ERROR(ContourTooLarge)
ELLFROB_ERROR(DegenerateJacobian)
ELLFROB_ERROR(NewtonDiverged)
ELLFROB_ERROR(DegenerateInput)
ELLFROB_ERROR(NotInvertible)
ELLFROB_ERROR(NotExceptional)
ELLFROB_ERROR(NotARoot)
ELLFROB_ERROR(UnknownRelation)
ELLFROB_ERROR(QuadratureUnconverged)
ELLFROB_ERROR(IllConditioned)
ELLFROB_ERROR(Overflow)
ELLFROB_ERROR(ParseError)

#undef ELLFROB_ERROR

} // namespace ellfrob
