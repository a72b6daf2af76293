#pragma once

#include <string>

#include "cvd/error.hpp"

namespace cvd {

/// Fuzzy color-vision profile. The four memberships are independent and
/// need not sum to one.
struct FuzzyProfile {
    double beta = 0.0;     ///< degree of color blindness
    double alpha_p = 0.0;  ///< degree of protan
    double alpha_d = 0.0;  ///< degree of deuteran
    double alpha_n = 1.0;  ///< degree of normality

    void validate() const {
        check(beta, "beta");
        check(alpha_p, "alpha_p");
        check(alpha_d, "alpha_d");
        check(alpha_n, "alpha_n");
    }

    friend bool operator==(const FuzzyProfile&, const FuzzyProfile&) = default;

private:
    static void check(double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
        }
    }
};

}  // namespace cvd
