#include "bubbly/lattice_sums.hpp"

#include "bubbly/errors.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace bubbly {

namespace {

const cplx I(0.0, 1.0);

constexpr int kJCap = 90;                         // terms of the k^2 series in the real-space part
constexpr int kShellCap = 20;                     // hard bound on Ewald shells
constexpr int kMaxR2 = 2 * kShellCap * kShellCap;
constexpr int kPMin = -kMaxBesselOrder;
constexpr int kPMax = kJCap + 1;
constexpr double kResonanceGuard = 1e-8;

// E_p(r2 * split^2) for r2 in [1, kMaxR2], p in [kPMin, kPMax].
class ExpintTable {
public:
    explicit ExpintTable(double split) : split2_(split * split) {
        const int width = kPMax - kPMin + 1;
        data_.assign(static_cast<std::size_t>(kMaxR2 + 1) * width, 0.0);
        for (int r2 = 1; r2 <= kMaxR2; ++r2) fill(r2, &data_[static_cast<std::size_t>(r2) * width]);
    }

    const double* row(int r2) const { return &data_[static_cast<std::size_t>(r2) * (kPMax - kPMin + 1)]; }
    double split2() const { return split2_; }

    // Indexing helper: row(r2)[p - kPMin].
    void fill(int r2, double* out) const {
        const double x = r2 * split2_;
        for (int p = 1; p <= kPMax; ++p) out[p - kPMin] = boost::math::expint(p, x);
        // Downward recurrence E_p = (e^{-x} - p E_{p+1}) / x is stable for p <= 0.
        const double ex = std::exp(-x);
        for (int p = 0; p >= kPMin; --p) out[p - kPMin] = (ex - p * out[p + 1 - kPMin]) / x;
    }

private:
    double split2_;
    std::vector<double> data_;
};

// One table per split value; the default split is the only one used in production.
const ExpintTable& expint_table(double split) {
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<const ExpintTable>> tables;
    const std::lock_guard lock(mutex);
    auto& slot = tables[split];
    if (!slot) slot = std::make_unique<const ExpintTable>(split);
    return *slot;
}

// alpha / (2 pi) reduced to [0, 1) per component, when alpha is fixed by the 90 degree rotation modulo 2 pi
// (Gamma or alpha*). Only exactly representable cases are recognized.
std::optional<double> c4_invariant(Bloch alpha) {
    const double ax = alpha.x / (2.0 * kPi), ay = alpha.y / (2.0 * kPi);
    const double rx = ax - std::floor(ax), ry = ay - std::floor(ay);
    if (rx == ry && (rx == 0.0 || rx == 0.5)) return rx;
    return std::nullopt;
}

// Sum over one C4 orbit of (i^{+-1})^{r l}, r = 0..3.
double orbit_factor(std::size_t l) { return l % 4 == 0 ? 4.0 : 0.0; }

// Ei(z) = gamma + ln z + sum z^n / (n n!), principal branch.
cplx expint_ei(cplx z) {
    cplx term = 1.0;
    cplx sum = 0.0;
    for (int n = 1; n < 400; ++n) {
        term *= z / double(n);
        const cplx add = term / double(n);
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return kEulerGamma + std::log(z) + sum;
}

struct Accum {
    std::vector<cplx> plus, minus;       // sums feeding c_l and c_{-l}
    std::vector<double> scale_p, scale_m;  // largest single contribution seen per order
    explicit Accum(int nmax)
        : plus(nmax + 1, 0.0), minus(nmax + 1, 0.0), scale_p(nmax + 1, 0.0), scale_m(nmax + 1, 0.0) {}
};

bool shell_negligible(const Accum& acc, const Accum& shell, double tol) {
    for (std::size_t l = 0; l < acc.plus.size(); ++l) {
        if (std::abs(shell.plus[l]) > tol * acc.scale_p[l]) return false;
        if (std::abs(shell.minus[l]) > tol * acc.scale_m[l]) return false;
    }
    return true;
}

void merge(Accum& acc, const Accum& shell) {
    for (std::size_t l = 0; l < acc.plus.size(); ++l) {
        acc.plus[l] += shell.plus[l];
        acc.minus[l] += shell.minus[l];
        acc.scale_p[l] = std::max(acc.scale_p[l], shell.scale_p[l]);
        acc.scale_m[l] = std::max(acc.scale_m[l], shell.scale_m[l]);
    }
}

// Points of the square shell max(|x|,|y|) = s.
template <class F>
void for_shell(int s, F&& f) {
    if (s == 0) {
        f(0, 0);
        return;
    }
    for (int t = -s; t <= s; ++t) {
        f(t, s);
        f(t, -s);
    }
    for (int t = -s + 1; t <= s - 1; ++t) {
        f(s, t);
        f(-s, t);
    }
}

void add_powers(Accum& acc, cplx base, cplx zp, cplx zm, bool orbit) {
    cplx ap = base, am = base;
    for (std::size_t l = 0; l < acc.plus.size(); ++l) {
        const double w = orbit ? orbit_factor(l) : 1.0;
        acc.plus[l] += w * ap;
        acc.minus[l] += w * am;
        acc.scale_p[l] = std::max(acc.scale_p[l], std::abs(ap));
        acc.scale_m[l] = std::max(acc.scale_m[l], std::abs(am));
        ap *= zp;
        am *= zm;
    }
}

// At a C4-invariant alpha the reciprocal points alpha + 2 pi q are summed one rotation orbit at a time,
// so the orders l != 0 mod 4 cancel exactly.
Accum spectral_part(cplx k, Bloch alpha, int nmax, const EwaldOptions& opt) {
    const double e2 = opt.split * opt.split;
    const cplx k2 = k * k;
    const std::optional<double> c4 = c4_invariant(alpha);
    Accum acc(nmax);
    cplx prev = 0.0;
    for (int s = 0; s <= opt.max_shells; ++s) {
        Accum shell(nmax);
        for_shell(s, [&](int qx, int qy) {
            double kx = alpha.x + 2.0 * kPi * qx;
            double ky = alpha.y + 2.0 * kPi * qy;
            bool orbit = false;
            if (c4) {
                kx = 2.0 * kPi * (qx + *c4);
                ky = 2.0 * kPi * (qy + *c4);
                // Orbit representatives: kx > 0, ky >= 0; the origin is its own orbit.
                if (kx != 0.0 || ky != 0.0) {
                    if (!(kx > 0.0 && ky >= 0.0)) return;
                    orbit = true;
                }
            }
            const double kap2 = kx * kx + ky * ky;
            const cplx base = -4.0 * I * std::exp((k2 - kap2) / (4.0 * e2)) / (kap2 - k2);
            add_powers(shell, base, I * cplx(kx, -ky) / k, I * cplx(kx, ky) / (-k), orbit);
        });
        const bool done = s >= 2 && shell_negligible(acc, shell, opt.tolerance);
        prev = acc.plus[0];
        merge(acc, shell);
        if (done) return acc;
    }
    throw ConvergenceError("lattice_sums: reciprocal-space sum did not converge", prev, acc.plus[0]);
}

Accum spatial_part(cplx k, Bloch alpha, int nmax, const EwaldOptions& opt) {
    const ExpintTable& tab = expint_table(opt.split);
    const double e2 = opt.split * opt.split;
    const cplx kk = k * k / (4.0 * e2);

    std::vector<cplx> tj(kJCap);  // (k^2/4E^2)^j / j!
    tj[0] = 1.0;
    for (int j = 1; j < kJCap; ++j) tj[j] = tj[j - 1] * kk / double(j);

    const std::optional<double> c4 = c4_invariant(alpha);
    Accum acc(nmax);
    std::vector<cplx> sl(nmax + 1);
    cplx prev = 0.0;
    for (int s = 1; s <= std::min(opt.max_shells, kShellCap); ++s) {
        Accum shell(nmax);
        // Canonical points (s, b), 0 <= b <= s, share the radial factor with their symmetric images.
        for (int b = 0; b <= s; ++b) {
            const int r2 = s * s + b * b;
            const double* ep = tab.row(r2);
            for (int l = 0; l <= nmax; ++l) {
                cplx sum = 0.0;
                for (int j = 0; j < kJCap; ++j) {
                    const cplx add = tj[j] * ep[j + 1 - l - kPMin];
                    sum += add;
                    if (j > 4 && std::abs(add) <= 1e-18 * std::abs(sum)) break;
                }
                sl[l] = sum;
            }
            auto visit = [&](int mx, int my, bool orbit = false) {
                // At alpha* every member of a rotation orbit has the same phase (-1)^{mx + my}.
                const cplx phase = !c4 ? std::exp(I * (mx * alpha.x + my * alpha.y))
                                       : cplx(*c4 == 0.0 || (mx + my) % 2 == 0 ? 1.0 : -1.0);
                const cplx zp = 2.0 * e2 * cplx(mx, -my) / k;
                const cplx zm = 2.0 * e2 * cplx(mx, my) / (-k);
                cplx ap = phase, am = phase;
                for (int l = 0; l <= nmax; ++l) {
                    const cplx vp = ap * sl[l], vm = am * sl[l];
                    const double w = orbit ? orbit_factor(static_cast<std::size_t>(l)) : 1.0;
                    shell.plus[l] += w * vp;
                    shell.minus[l] += w * vm;
                    shell.scale_p[l] = std::max(shell.scale_p[l], std::abs(vp));
                    shell.scale_m[l] = std::max(shell.scale_m[l], std::abs(vm));
                    ap *= zp;
                    am *= zm;
                }
            };
            if (c4) {
                // Rotation orbits of (s, b) and, for 0 < b < s, of (s, -b).
                visit(s, b, true);
                if (b != 0 && b != s) visit(s, -b, true);
            } else if (b == 0) {
                visit(s, 0), visit(-s, 0), visit(0, s), visit(0, -s);
            } else if (b == s) {
                visit(s, s), visit(-s, s), visit(s, -s), visit(-s, -s);
            } else {
                visit(s, b), visit(-s, b), visit(s, -b), visit(-s, -b);
                visit(b, s), visit(-b, s), visit(b, -s), visit(-b, -s);
            }
        }
        const bool done = s >= 2 && shell_negligible(acc, shell, opt.tolerance);
        prev = acc.plus[0];
        merge(acc, shell);
        if (done) return acc;
    }
    throw ConvergenceError("lattice_sums: real-space sum did not converge", prev, acc.plus[0]);
}

}  // namespace

double resonance_distance(double k, Bloch alpha) {
    double best = INFINITY;
    for (int qx = -3; qx <= 3; ++qx) {
        for (int qy = -3; qy <= 3; ++qy) {
            const double r = std::hypot(alpha.x + 2.0 * kPi * qx, alpha.y + 2.0 * kPi * qy);
            best = std::min(best, std::abs(r - k));
        }
    }
    return best;
}

LatticeSumTable lattice_sums(cplx k, Bloch alpha, int nmax, const EwaldOptions& opt) {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || !std::isfinite(alpha.x) || !std::isfinite(alpha.y))
        throw InvalidArgument("lattice_sums: non-finite input");
    if (nmax < 0 || nmax > kMaxBesselOrder) throw InvalidArgument("lattice_sums: order out of range");
    if (k.imag() < 0.0 || std::abs(k) == 0.0) throw InvalidArgument("lattice_sums: need k != 0 with Im k >= 0");
    if (k.imag() == 0.0) {
        const double d = resonance_distance(k.real(), alpha);
        if (d < kResonanceGuard)
            throw ResonanceError("lattice_sums: k = " + std::to_string(k.real()) + " on an empty-lattice resonance", d);
    }
    if (opt.max_shells > kShellCap) throw InvalidArgument("lattice_sums: max_shells above table bound");

    const Accum spec = spectral_part(k, alpha, nmax, opt);
    const Accum spat = spatial_part(k, alpha, nmax, opt);
    const cplx f = -I / kPi;

    std::vector<cplx> q(2 * nmax + 1);
    for (int n = -nmax; n <= nmax; ++n) {
        // Q_n = (-1)^n c_{-n}; c_{-l} comes from the "minus" sums, c_l from "plus".
        const int l = std::abs(n);
        cplx c = n >= 0 ? spec.minus[l] + f * spat.minus[l] : spec.plus[l] + f * spat.plus[l];
        if (n == 0) c += -1.0 - (I / kPi) * expint_ei(k * k / (4.0 * opt.split * opt.split));
        q[n + nmax] = (l % 2 == 0 ? 1.0 : -1.0) * c;
    }
    return LatticeSumTable(nmax, std::move(q));
}

cplx lattice_sum(int n, double k, Bloch alpha) { return lattice_sums(k, alpha, std::abs(n))(n); }

LatticeSumTable lattice_sum_oracle(int nmax, double k, Bloch alpha, double sigma, int cutoff) {
    if (!(sigma > 0.0)) throw InvalidArgument("lattice_sum_oracle: damping must be positive");
    if (cutoff < 20) throw InvalidArgument("lattice_sum_oracle: cutoff must be >= 20");
    if (nmax < 0) throw InvalidArgument("lattice_sum_oracle: negative order bound");
    const cplx kc(k, sigma);

    // Group lattice points by |m|^2 so each radius costs one Hankel evaluation.
    struct Pt {
        int r2, x, y;
    };
    std::vector<Pt> pts;
    pts.reserve(static_cast<std::size_t>(2 * cutoff + 1) * (2 * cutoff + 1));
    for (int x = -cutoff; x <= cutoff; ++x)
        for (int y = -cutoff; y <= cutoff; ++y)
            if (x != 0 || y != 0) pts.push_back({x * x + y * y, x, y});
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
        return a.r2 != b.r2 ? a.r2 < b.r2 : (a.x != b.x ? a.x < b.x : a.y < b.y);
    });

    std::vector<cplx> sum(2 * nmax + 1, 0.0);
    std::vector<cplx> h;
    int cur = -1;
    for (const Pt& p : pts) {
        const double r = std::sqrt(double(p.r2));
        if (p.r2 != cur) {
            cur = p.r2;
            h = hankel1_orders(nmax, kc * r);
        }
        const cplx phase = std::exp(I * (p.x * alpha.x + p.y * alpha.y));
        const cplx u = cplx(p.x, p.y) / r;  // e^{i arg m}
        cplx up = phase, um = phase;
        sum[nmax] += h[0] * phase;
        for (int n = 1; n <= nmax; ++n) {
            up *= u;
            um *= std::conj(u);
            const double sg = (n % 2 == 0) ? 1.0 : -1.0;
            sum[nmax + n] += h[n] * up;
            sum[nmax - n] += sg * h[n] * um;
        }
    }
    return LatticeSumTable(nmax, std::move(sum));
}

std::size_t LatticeSumCache::KeyHash::operator()(const Key& key) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(key.k));
    h ^= std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(key.ax)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(key.ay)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::shared_ptr<const LatticeSumTable> LatticeSumCache::get(double k, Bloch alpha, int nmax) {
    const Key key{k, alpha.x, alpha.y};
    {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it != map_.end() && it->second->nmax() >= nmax) return it->second;
    }
    auto table = std::make_shared<const LatticeSumTable>(lattice_sums(k, alpha, nmax));
    std::unique_lock lock(mutex_);
    auto it = map_.find(key);
    if (it != map_.end() && it->second->nmax() >= nmax) return it->second;
    if (map_.size() >= capacity_) map_.clear();
    map_[key] = table;
    return table;
}

std::size_t LatticeSumCache::size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
}

void LatticeSumCache::clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
}

LatticeSumCache& default_lattice_cache() {
    static LatticeSumCache cache;
    return cache;
}

}  // namespace bubbly
