#pragma once

#include <stdexcept>
#include <string>

namespace mwk {

// Tolerances and caps shared by all special-function evaluators.
struct AccuracyPolicy {
    double target_rel_error = 1e-10;
    int max_terms = 600;
    double large_x_switch = 30.0;   // series/integral -> asymptotic crossover
    double series_x_max = 5.0;      // direct series safe up to here
    double mu_epsilon = 1e-4;       // half-step for the degenerate-order limit path

    AccuracyPolicy() = default;
    AccuracyPolicy(double tol, int terms, double big_x)
        : target_rel_error(tol), max_terms(terms), large_x_switch(big_x) {
        validate();
    }

    void validate() const {
        if (!(target_rel_error > 0.0 && target_rel_error <= 1e-4))
            throw std::invalid_argument("AccuracyPolicy: target_rel_error must be in (0, 1e-4]");
        if (max_terms < 50)
            throw std::invalid_argument("AccuracyPolicy: max_terms must be >= 50");
        if (!(large_x_switch > 0.0))
            throw std::invalid_argument("AccuracyPolicy: large_x_switch must be positive");
    }
};

// Numerical failure distinct from bad input.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mwk
