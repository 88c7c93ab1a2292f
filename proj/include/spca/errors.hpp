#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spca {

/// Raised when an enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double budget)
        : std::runtime_error(what + ": requires " + std::to_string(static_cast<long double>(required)) +
                             " but budget is " + std::to_string(static_cast<long double>(budget))),
          required_(required),
          budget_(budget) {}

    [[nodiscard]] double required() const noexcept { return required_; }
    [[nodiscard]] double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

/// A projection (or normalisation) produced the zero vector.
class DegenerateProjection : public std::runtime_error {
public:
    DegenerateProjection() : std::runtime_error("degenerate zero projection") {}
};

/// The projected power method hit a zero matrix-vector product or zero projection.
class DegenerateIterate : public std::runtime_error {
public:
    explicit DegenerateIterate(std::size_t iteration)
        : std::runtime_error("degenerate iterate at t=" + std::to_string(iteration)), iteration_(iteration) {}

    [[nodiscard]] std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(std::size_t iterations, double residual)
        : std::runtime_error("eigensolver did not converge after " + std::to_string(iterations) +
                             " iterations (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace spca
