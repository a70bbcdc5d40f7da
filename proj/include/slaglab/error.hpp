#pragma once

#include <stdexcept>
#include <string>

namespace slaglab {

/// Base class for all errors raised by the library. `code()` returns a
/// stable machine-readable tag used by the CLI to pick exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define SLAGLAB_DEFINE_ERROR(Name)                                    \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

SLAGLAB_DEFINE_ERROR(NonLagrangianInput);
SLAGLAB_DEFINE_ERROR(NotTransversal);
SLAGLAB_DEFINE_ERROR(QuadratureNonConvergence);
SLAGLAB_DEFINE_ERROR(RadiusTooSmall);
SLAGLAB_DEFINE_ERROR(NoConvergence);
SLAGLAB_DEFINE_ERROR(InfeasibleTargets);
SLAGLAB_DEFINE_ERROR(AlphaTooLarge);
SLAGLAB_DEFINE_ERROR(PlaneMismatch);
SLAGLAB_DEFINE_ERROR(ParameterInconsistency);
SLAGLAB_DEFINE_ERROR(ResolutionInfeasible);
SLAGLAB_DEFINE_ERROR(SingularMetric);
SLAGLAB_DEFINE_ERROR(EigSolverNonConvergence);
SLAGLAB_DEFINE_ERROR(ChartDomainError);
SLAGLAB_DEFINE_ERROR(DegenerateProjection);
SLAGLAB_DEFINE_ERROR(DimensionMismatch);
SLAGLAB_DEFINE_ERROR(ParseError);

#undef SLAGLAB_DEFINE_ERROR

} // namespace slaglab
