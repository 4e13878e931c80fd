#pragma once

#include "bubbly/specfun.hpp"

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace bubbly {

/// Bloch (quasi-momentum) vector in the Brillouin zone [0, 2pi)^2.
struct Bloch {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr Bloch kAlphaStar{kPi, kPi};

/// Q_n = sum_{m != 0} H_n^(1)(k|m|) e^{i n arg m} e^{i m.alpha} for |n| <= nmax.
class LatticeSumTable {
public:
    LatticeSumTable() = default;
    LatticeSumTable(int nmax, std::vector<cplx> values) : nmax_(nmax), q_(std::move(values)) {}

    int nmax() const noexcept { return nmax_; }
    cplx operator()(int n) const { return q_[static_cast<std::size_t>(n + nmax_)]; }

private:
    int nmax_ = 0;
    std::vector<cplx> q_;
};

struct EwaldOptions {
    double split = 1.7724538509055160273;  // sqrt(pi)
    int max_shells = 14;
    double tolerance = 1e-16;
};

/// Distance of k from the nearest empty-lattice resonance min_q | |alpha + 2 pi q| - k |.
double resonance_distance(double k, Bloch alpha);

/// Ewald-split evaluation of all Q_n, |n| <= nmax. Complex k with Im k >= 0 is accepted.
LatticeSumTable lattice_sums(cplx k, Bloch alpha, int nmax, const EwaldOptions& opt = {});

cplx lattice_sum(int n, double k, Bloch alpha);

/// Damped direct sum over 0 < max(|m_x|,|m_y|) <= cutoff at wavenumber k + i sigma, all |n| <= nmax.
/// Shares no code with the Ewald path; used for validation.
LatticeSumTable lattice_sum_oracle(int nmax, double k, Bloch alpha, double sigma, int cutoff);

/// Shared memo of lattice-sum tables keyed by (k, alpha) bit patterns; safe for concurrent use.
class LatticeSumCache {
public:
    explicit LatticeSumCache(std::size_t capacity = 1 << 16) : capacity_(capacity) {}

    std::shared_ptr<const LatticeSumTable> get(double k, Bloch alpha, int nmax);

    std::size_t size() const;
    void clear();

private:
    struct Key {
        double k, ax, ay;
        bool operator==(const Key& o) const { return k == o.k && ax == o.ax && ay == o.ay; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const noexcept;
    };

    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, std::shared_ptr<const LatticeSumTable>, KeyHash> map_;
};

/// Process-wide cache used by the operator assembly routines.
LatticeSumCache& default_lattice_cache();

}  // namespace bubbly
