#pragma once

namespace qlid {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Wraps an angle into the canonical range [0, 2*pi). Throws ValidationError
// on non-finite input.
double canonical_phase(double phase);

// A complex probability amplitude in polar form. The magnitude is tied to a
// classical probability through the Born rule (probability = magnitude^2),
// the phase carries the interference information. Immutable after
// construction; the phase is always canonical.
class Amplitude {
public:
    Amplitude() = default;  // zero amplitude
    Amplitude(double magnitude, double phase);

    double magnitude() const { return magnitude_; }
    double phase() const { return phase_; }

    // Product: magnitudes multiply, phases add modulo 2*pi.
    friend Amplitude operator*(const Amplitude& a, const Amplitude& b);

private:
    double magnitude_ = 0.0;
    double phase_ = 0.0;
};

// Inverse Born rule: amplitude of magnitude sqrt(p) with the given phase.
// Rejects p outside [0, 1] and non-finite inputs.
Amplitude from_probability(double p, double phase = 0.0);

// Born rule: squared magnitude. The phase never contributes.
double born_probability(const Amplitude& a);

}  // namespace qlid
