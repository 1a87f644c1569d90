#include "morsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "morsim/errors.hpp"

namespace morsim {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::aH: return "aH";
        case Mode::aV: return "aV";
        case Mode::bH: return "bH";
        case Mode::bV: return "bV";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    for (auto m : {Mode::aH, Mode::aV, Mode::bH, Mode::bV}) {
        if (name == mode_name(m)) return m;
    }
    throw ValidationError("unknown mode '" + std::string(name) + "' (expected aH, aV, bH or bV)");
}

std::uint32_t total_photons(const Occupation& occ) {
    std::uint32_t n = 0;
    for (auto c : occ) n += c;
    return n;
}

KetState KetState::from_components(std::vector<Component> components, double tail) {
    std::sort(components.begin(), components.end(),
              [](const Component& x, const Component& y) { return x.first < y.first; });
    KetState s;
    s.tail_ = tail;
    s.components_.reserve(components.size());
    for (std::size_t i = 0; i < components.size();) {
        Complex sum = components[i].second;
        std::size_t j = i + 1;
        while (j < components.size() && components[j].first == components[i].first) {
            sum += components[j].second;
            ++j;
        }
        if (std::abs(sum) < kPruneThreshold) {
            s.tail_ += std::norm(sum);
        } else {
            s.components_.emplace_back(components[i].first, sum);
        }
        i = j;
    }
    return s;
}

double KetState::norm2() const {
    double n = 0.0;
    for (const auto& [occ, amp] : components_) n += std::norm(amp);
    return n;
}

Complex KetState::amplitude(const Occupation& occ) const {
    auto it = std::lower_bound(components_.begin(), components_.end(), occ,
                               [](const Component& c, const Occupation& key) { return c.first < key; });
    if (it != components_.end() && it->first == occ) return it->second;
    return {};
}

KetState make_basis_state(const Occupation& occ) {
    return KetState::from_components({{occ, Complex{1.0, 0.0}}});
}

Complex inner_product(const KetState& bra, const KetState& ket) {
    auto b = bra.components();
    auto k = ket.components();
    Complex sum{};
    std::size_t i = 0, j = 0;
    while (i < b.size() && j < k.size()) {
        if (b[i].first < k[j].first) {
            ++i;
        } else if (k[j].first < b[i].first) {
            ++j;
        } else {
            sum += std::conj(b[i].second) * k[j].second;
            ++i;
            ++j;
        }
    }
    return sum;
}

double projection_probability(const KetState& state, const Occupation& occ) {
    return std::norm(state.amplitude(occ));
}

double normally_ordered_moment(const KetState& state, const std::array<std::uint32_t, kNumModes>& powers) {
    double total = 0.0;
    for (const auto& [occ, amp] : state.components()) {
        double weight = 1.0;
        for (std::size_t m = 0; m < kNumModes && weight != 0.0; ++m) {
            if (occ[m] < powers[m]) {
                weight = 0.0;
                break;
            }
            // falling factorial n (n-1) ... (n-p+1)
            for (std::uint32_t k = 0; k < powers[m]; ++k) weight *= static_cast<double>(occ[m] - k);
        }
        total += weight * std::norm(amp);
    }
    return total;
}

TwoModeUnitary::TwoModeUnitary(const Eigen::Matrix2cd& m) : m_(m) {
    const Eigen::Matrix2cd defect = m_.adjoint() * m_ - Eigen::Matrix2cd::Identity();
    if (!(defect.cwiseAbs().maxCoeff() <= kTolerance)) {
        throw ValidationError("two-mode matrix is not unitary (max |U†U − 1| = " +
                              std::to_string(defect.cwiseAbs().maxCoeff()) + ")");
    }
}

TwoModeUnitary TwoModeUnitary::phased_real(const Eigen::Matrix2d& rotation, double phase_angle) {
    TwoModeUnitary u(std::polar(1.0, phase_angle) * rotation.cast<Complex>());
    u.real_form_ = RealForm{rotation, phase_angle};
    return u;
}

namespace {

// Walks photon-number levels 0, 1, 2, ... of a mode pair, holding the lifted
// matrix of the current level. Column p is the image of |p, n−p>; entry j of a
// column is the amplitude on |j, n−j>.
//
// Level n follows from level n−1 through
//     |p,q> = (√p first†|p−1,q> + √q second†|p,q−1>) / n,
// which averages both creation routes. Unlike building |p,q> by repeated
// creation along a single route, this map is contractive up to a factor
// √(1 + 1/n) per level, so rounding errors stay O(√n ε).
template <typename T>
class LevelLift {
public:
    LevelLift(T u00, T u01, T u10, T u11) : u_{u00, u01, u10, u11}, cur_{T{1}}, sqrt_{0.0, 1.0} {}

    std::uint32_t level() const { return n_; }

    void advance() {
        const std::size_t n = n_ + 1;  // new level
        while (sqrt_.size() <= n) sqrt_.push_back(std::sqrt(static_cast<double>(sqrt_.size())));
        prev_.swap(cur_);
        cur_.resize((n + 1) * (n + 1));
        const double inv_n = 1.0 / static_cast<double>(n);
        const double* sq = sqrt_.data();
        for (std::size_t p = 0; p <= n; ++p) {
            // Column p mixes columns p−1 and p of the previous level; either may be absent.
            const std::size_t q = n - p;
            const T wa = p > 0 ? T(sq[p] * inv_n) : T{};
            const T wb = q > 0 ? T(sq[q] * inv_n) : T{};
            const T* a = prev_.data() + (p > 0 ? (p - 1) * n : 0);
            const T* b = prev_.data() + (q > 0 ? p * n : 0);
            const T a_up = wa * u_[0], a_keep = wa * u_[1];
            const T b_up = wb * u_[2], b_keep = wb * u_[3];
            T* __restrict out = cur_.data() + p * (n + 1);
            out[0] = sq[n] * (a_keep * a[0] + b_keep * b[0]);
            for (std::size_t j = 1; j < n; ++j) {
                out[j] = sq[j] * (a_up * a[j - 1] + b_up * b[j - 1]) + sq[n - j] * (a_keep * a[j] + b_keep * b[j]);
            }
            out[n] = sq[n] * (a_up * a[n - 1] + b_up * b[n - 1]);
        }
        n_ = static_cast<std::uint32_t>(n);
    }

    const T* column(std::uint32_t p) const { return &cur_[static_cast<std::size_t>(p) * (n_ + 1)]; }

private:
    std::array<T, 4> u_;
    std::uint32_t n_ = 0;
    std::vector<T> cur_;
    std::vector<T> prev_;
    std::vector<double> sqrt_;
};

template <typename T>
Eigen::MatrixXcd subspace_matrix_impl(LevelLift<T> lift, std::uint32_t n, Complex level_phase) {
    while (lift.level() < n) lift.advance();
    const Eigen::Index dim = static_cast<Eigen::Index>(n) + 1;
    Eigen::MatrixXcd m(dim, dim);
    const Complex scale = std::pow(level_phase, static_cast<double>(n));
    for (std::uint32_t col = 0; col <= n; ++col) {
        const T* image = lift.column(n - col);
        for (std::uint32_t j = 0; j <= n; ++j) m(n - j, col) = scale * Complex(image[j]);
    }
    return m;
}

struct PairInput {
    std::uint32_t total;
    std::uint32_t p;  // photons in the first mode
    Complex amplitude;
    std::size_t group;
};

template <typename T>
void accumulate(LevelLift<T> lift, const std::vector<PairInput>& inputs, Complex level_phase,
                std::vector<std::vector<Complex>>& acc) {
    Complex phase{1.0, 0.0};  // level_phase^level
    for (const auto& in : inputs) {
        while (lift.level() < in.total) {
            lift.advance();
            phase *= level_phase;
        }
        const T* image = lift.column(in.p);
        const Complex a = in.amplitude * phase;
        auto& out = acc[in.group];
        for (std::uint32_t j = 0; j <= in.total; ++j) out[j] += a * image[j];
    }
}

}  // namespace

Eigen::MatrixXcd two_mode_unitary_subspace_matrix(const TwoModeUnitary& u, std::uint32_t n) {
    if (const auto& rf = u.real_form()) {
        const auto& r = rf->rotation;
        return subspace_matrix_impl(LevelLift<double>(r(0, 0), r(0, 1), r(1, 0), r(1, 1)), n,
                                    std::polar(1.0, rf->phase_angle));
    }
    const auto& m = u.matrix();
    return subspace_matrix_impl(LevelLift<Complex>(m(0, 0), m(0, 1), m(1, 0), m(1, 1)), n, Complex{1.0, 0.0});
}

KetState apply_two_mode_unitary(const KetState& state, ModePair pair, const TwoModeUnitary& u) {
    const std::size_t f = index(pair.first);
    const std::size_t s = index(pair.second);
    if (f == s || f >= kNumModes || s >= kNumModes) {
        throw ValidationError("two-mode unitary needs two distinct modes");
    }

    const auto& m = u.matrix();
    if (m(0, 1) == Complex{} && m(1, 0) == Complex{}) {
        // Diagonal: each pair ket only picks up u00^p u11^q.
        std::vector<KetState::Component> out(state.components().begin(), state.components().end());
        for (auto& [occ, amp] : out) {
            for (std::uint32_t k = 0; k < occ[f]; ++k) amp *= m(0, 0);
            for (std::uint32_t k = 0; k < occ[s]; ++k) amp *= m(1, 1);
        }
        return KetState::from_components(std::move(out), state.truncation_tail());
    }

    // Photon number in the pair is conserved, so outputs are grouped by the
    // spectator occupations plus the pair total (stashed in the first slot).
    std::map<Occupation, std::size_t> group_of;
    std::vector<Occupation> group_keys;
    std::vector<PairInput> inputs;
    inputs.reserve(state.size());
    for (const auto& [occ, amp] : state.components()) {
        Occupation key = occ;
        key[f] = occ[f] + occ[s];
        key[s] = 0;
        auto [it, inserted] = group_of.try_emplace(key, group_keys.size());
        if (inserted) group_keys.push_back(key);
        inputs.push_back({key[f], occ[f], amp, it->second});
    }
    std::stable_sort(inputs.begin(), inputs.end(),
                     [](const PairInput& x, const PairInput& y) { return x.total < y.total; });

    std::vector<std::vector<Complex>> acc(group_keys.size());
    for (std::size_t g = 0; g < group_keys.size(); ++g) acc[g].assign(group_keys[g][f] + 1, Complex{});

    if (const auto& rf = u.real_form()) {
        const auto& r = rf->rotation;
        accumulate(LevelLift<double>(r(0, 0), r(0, 1), r(1, 0), r(1, 1)), inputs, std::polar(1.0, rf->phase_angle), acc);
    } else {
        accumulate(LevelLift<Complex>(m(0, 0), m(0, 1), m(1, 0), m(1, 1)), inputs, Complex{1.0, 0.0}, acc);
    }

    std::vector<KetState::Component> out;
    for (std::size_t g = 0; g < group_keys.size(); ++g) {
        const std::uint32_t n = group_keys[g][f];
        for (std::uint32_t j = 0; j <= n; ++j) {
            Occupation occ = group_keys[g];
            occ[f] = j;
            occ[s] = n - j;
            out.emplace_back(occ, acc[g][j]);
        }
    }
    return KetState::from_components(std::move(out), state.truncation_tail());
}

}  // namespace morsim
