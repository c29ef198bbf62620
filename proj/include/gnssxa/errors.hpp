#ifndef GNSSXA_ERRORS_HPP
#define GNSSXA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gnssxa {

/// Scenario file could not be parsed (malformed JSON, wrong field types).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scenario file parsed but violates a structural rule (ordering, counts).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Satellite placement constraints cannot be met.
class InfeasibleGeometry : public std::runtime_error {
public:
    explicit InfeasibleGeometry(const std::string& msg) : std::runtime_error(msg) {}
};

/// Geometry matrix is rank-deficient at the working tolerance.
class DegenerateGeometry : public std::runtime_error {
public:
    explicit DegenerateGeometry(const std::string& msg) : std::runtime_error(msg) {}
};

/// Vector/matrix sizes inconsistent with the operation's contract.
class DimensionMismatch : public std::runtime_error {
public:
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

/// Attack synthesis has no solution under the stated constraints.
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rank assumption of the feasible-space construction fails.
class RankDeficient : public std::runtime_error {
public:
    explicit RankDeficient(const std::string& msg) : std::runtime_error(msg) {}
};

/// Projection matrix in the attack synthesis is numerically singular.
class SingularProjection : public std::runtime_error {
public:
    explicit SingularProjection(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of the function.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Covariance input is not symmetric positive definite.
class NotSPD : public std::runtime_error {
public:
    explicit NotSPD(const std::string& msg) : std::runtime_error(msg) {}
};

/// Record set lacks one of the two hypotheses.
class EmptyHypothesis : public std::runtime_error {
public:
    explicit EmptyHypothesis(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gnssxa

#endif
