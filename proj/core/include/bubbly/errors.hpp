#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bubbly {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-range argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Argument at a singular point of the function (e.g. Hankel at z = 0).
class SingularArgument : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain (e.g. eta(k) with k <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Wavenumber on (or within 1e-8 of) an empty-lattice resonance |2 pi m + alpha| = k.
class ResonanceError : public Error {
public:
    ResonanceError(const std::string& what, double distance)
        : Error(what), distance_(distance) {}
    double distance() const noexcept { return distance_; }

private:
    double distance_;
};

/// Series or iteration failed to converge; carries the two last estimates.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::complex<double> previous,
                     std::complex<double> last)
        : Error(what), previous_(previous), last_(last) {}
    std::complex<double> previous() const noexcept { return previous_; }
    std::complex<double> last() const noexcept { return last_; }

private:
    std::complex<double> previous_;
    std::complex<double> last_;
};

/// Requested configuration the formulation does not support (alpha = 0 for the band operator).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Division by a Bessel value that vanishes (J_n(kR_d) or J_n'(kR_d) at a zero).
class ResonantDenominatorError : public Error {
public:
    using Error::Error;
};

/// Matrix assembly or factorisation produced a singular system.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Frequency lies inside a propagating band, so some A^alpha is not invertible.
class InBandError : public Error {
public:
    using Error::Error;
};

/// Root finder exhausted its iteration budget or left its bracket.
class NoRootFound : public Error {
public:
    using Error::Error;
};

/// Least-squares band-curvature fit produced a non-positive constant.
class CurvatureFitError : public Error {
public:
    using Error::Error;
};

}  // namespace bubbly
