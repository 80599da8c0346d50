#ifndef CMCFACE_ERRORS_HPP
#define CMCFACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmcface {

// Base class for all library errors. Subtypes mirror the failure modes of
// the individual modules so callers can catch them selectively.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// lorentz
struct NotHermitian : Error { using Error::Error; };
struct NotInGroup : Error { using Error::Error; };

// expressions
struct ParseError : Error {
    int line = 1, column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};
struct ZeroExpression : Error { using Error::Error; };
struct ConstantExpression : Error { using Error::Error; };
struct InconsistentOrder : Error { using Error::Error; };
struct SingularityOnPath : Error { using Error::Error; };

// weierstrass
struct BadParams : Error { using Error::Error; };
struct NotSU11Params : Error { using Error::Error; };
struct ZeroLambda : Error { using Error::Error; };
struct UndeterminedLimit : Error { using Error::Error; };
struct PoleOfOmega : Error { using Error::Error; };

// frame integration
struct ToleranceNotMet : Error { using Error::Error; };
struct NotSU11 : Error {
    double residual = 0.0;
    NotSU11(const std::string& msg, double res)
        : Error(msg + " (su11 residual " + std::to_string(res) + ")"),
          residual(res) {}
};

// surface
struct NotOnDeSitter : Error { using Error::Error; };
struct SingularNormal : Error { using Error::Error; };
struct InsufficientStencil : Error { using Error::Error; };

// end analysis
struct UmbilicEnd : Error { using Error::Error; };
struct UmbilicSurface : Error { using Error::Error; };
struct IrregularEnd : Error { using Error::Error; };
struct ConstantGauss : Error { using Error::Error; };
struct InequalityViolated : Error { using Error::Error; };
struct DegreeUndetermined : Error { using Error::Error; };
struct InternalInconsistency : Error { using Error::Error; };

// cli / io
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace cmcface

#endif // CMCFACE_ERRORS_HPP
