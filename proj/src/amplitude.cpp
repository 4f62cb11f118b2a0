#include "qlid/amplitude.hpp"

#include <cmath>
#include <string>

#include "qlid/errors.hpp"

namespace qlid {

namespace {
constexpr double kMagnitudeSlack = 1e-12;
}

double canonical_phase(double phase) {
    if (!std::isfinite(phase)) {
        throw ValidationError("phase must be finite");
    }
    double p = std::fmod(phase, kTwoPi);
    if (p < 0.0) {
        p += kTwoPi;
    }
    // fmod of values just below a multiple of 2*pi can round back onto 2*pi
    if (p >= kTwoPi) {
        p = 0.0;
    }
    return p;
}

Amplitude::Amplitude(double magnitude, double phase) {
    if (!std::isfinite(magnitude) || magnitude < 0.0 || magnitude > 1.0 + kMagnitudeSlack) {
        throw ValidationError("amplitude magnitude must lie in [0, 1], got " +
                              std::to_string(magnitude));
    }
    magnitude_ = magnitude;
    phase_ = canonical_phase(phase);
}

Amplitude operator*(const Amplitude& a, const Amplitude& b) {
    double m = a.magnitude_ * b.magnitude_;
    // products of in-range magnitudes can drift a few ulp above 1
    if (m > 1.0) {
        m = 1.0;
    }
    return Amplitude(m, a.phase_ + b.phase_);
}

Amplitude from_probability(double p, double phase) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ValidationError("probability must lie in [0, 1], got " + std::to_string(p));
    }
    return Amplitude(std::sqrt(p), phase);
}

double born_probability(const Amplitude& a) {
    return a.magnitude() * a.magnitude();
}

}  // namespace qlid
