#pragma once

#include <stdexcept>
#include <string>

namespace centfoc {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Input violates one of the admissibility conditions on (f, g, k, l).
class AssumptionViolation : public Error {
public:
    AssumptionViolation(const std::string& which, const std::string& message)
        : Error(which, message) {}
};

class NonInvertibleLeadingCoefficient : public Error {
public:
    explicit NonInvertibleLeadingCoefficient(const std::string& message)
        : Error("non_invertible_leading_coefficient", message) {}
};

class NonzeroConstantTerm : public Error {
public:
    explicit NonzeroConstantTerm(const std::string& message)
        : Error("nonzero_constant_term", message) {}
};

class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& message)
        : Error("quadrature_failure", message) {}
};

class InterpolationFailure : public Error {
public:
    explicit InterpolationFailure(const std::string& message)
        : Error("interpolation_failure", message) {}
};

class OutOfRadius : public Error {
public:
    explicit OutOfRadius(const std::string& message)
        : Error("out_of_radius", message) {}
};

class OrderTooLow : public Error {
public:
    explicit OrderTooLow(const std::string& message)
        : Error("order_too_low", message) {}
};

class DegenerateJacobian : public Error {
public:
    explicit DegenerateJacobian(const std::string& message)
        : Error("degenerate_jacobian", message) {}
};

class NegativeBracket : public Error {
public:
    explicit NegativeBracket(const std::string& message)
        : Error("negative_bracket", message) {}
};

class NoReturnDetected : public Error {
public:
    explicit NoReturnDetected(const std::string& message)
        : Error("no_return_detected", message) {}
};

class ResidualBelowNoiseFloor : public Error {
public:
    explicit ResidualBelowNoiseFloor(const std::string& message)
        : Error("residual_below_noise_floor", message) {}
};

}  // namespace centfoc
