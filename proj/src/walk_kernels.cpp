// Walk stepping and coin reduction kernels: OpenMP versions and their serial
// references. Both variants share the per-site expressions below.

#include <omp.h>

#include "qthermo/qwalk.hpp"

namespace qthermo {

namespace {

using Site = WalkState::Site;

constexpr double kTwoThirds = 2.0 / 3.0;

// G psi = (2/3)(sum psi) - psi. Summing (R + L) + N keeps the update exactly
// symmetric under R <-> L.
inline Complex coin_component(const Site &s, int k) {
    const Complex total = (s[kRight] + s[kLeft]) + s[kStay];
    return kTwoThirds * total - s[k];
}

inline Site shifted_site(const Site *sites, std::size_t i, std::size_t count) {
    const Site zero{};
    const Site &from_left  = i > 0 ? sites[i - 1] : zero;
    const Site &here       = sites[i];
    const Site &from_right = i + 1 < count ? sites[i + 1] : zero;
    return {coin_component(from_left, kRight), coin_component(here, kStay), coin_component(from_right, kLeft)};
}

void require_interior(const WalkState &state) {
    const auto &sites = state.sites();
    const auto  empty = [](const Site &s) { return s[0] == Complex{} && s[1] == Complex{} && s[2] == Complex{}; };
    if (!empty(sites.front()) || !empty(sites.back())) {
        throw Error(ErrorCode::BoundaryOverflow, "walker reached the lattice edge at |n| = " +
                                                     std::to_string(state.half_width()));
    }
}

void prepare_output(const WalkState &in, WalkState &out) {
    if (out.half_width() != in.half_width() || out.size() != in.size()) out = WalkState(in.half_width());
}

constexpr std::size_t kReduceBlock = 256;

struct Accumulator {
    std::array<Complex, 6> upper{}; // (0,0) (1,1) (2,2) (0,1) (0,2) (1,2)

    void add(const Site &s) {
        upper[0] += std::norm(s[0]);
        upper[1] += std::norm(s[1]);
        upper[2] += std::norm(s[2]);
        upper[3] += s[0] * std::conj(s[1]);
        upper[4] += s[0] * std::conj(s[2]);
        upper[5] += s[1] * std::conj(s[2]);
    }
    void add(const Accumulator &o) {
        for (std::size_t k = 0; k < upper.size(); ++k) upper[k] += o.upper[k];
    }
    [[nodiscard]] ComplexMatrix matrix() const {
        ComplexMatrix rho(3, 3);
        rho(0, 0) = upper[0].real();
        rho(1, 1) = upper[1].real();
        rho(2, 2) = upper[2].real();
        rho(0, 1) = upper[3];
        rho(0, 2) = upper[4];
        rho(1, 2) = upper[5];
        rho(1, 0) = std::conj(upper[3]);
        rho(2, 0) = std::conj(upper[4]);
        rho(2, 1) = std::conj(upper[5]);
        return rho;
    }
};

} // namespace

void step_into(const WalkState &in, WalkState &out) {
    require_interior(in);
    prepare_output(in, out);
    const Site *src   = in.sites().data();
    Site       *dst   = out.sites().data();
    const auto  count = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        dst[i] = shifted_site(src, static_cast<std::size_t>(i), static_cast<std::size_t>(count));
    }
}

void step_serial_into(const WalkState &in, WalkState &out) {
    require_interior(in);
    prepare_output(in, out);
    const Site *src   = in.sites().data();
    Site       *dst   = out.sites().data();
    const auto  count = in.size();
    for (std::size_t i = 0; i < count; ++i) dst[i] = shifted_site(src, i, count);
}

WalkState step(const WalkState &state) {
    WalkState out(state.half_width());
    step_into(state, out);
    return out;
}

WalkState step_serial(const WalkState &state) {
    WalkState out(state.half_width());
    step_serial_into(state, out);
    return out;
}

ComplexMatrix reduce_coin_matrix(const WalkState &state) {
    const auto &sites  = state.sites();
    const auto  blocks = static_cast<std::ptrdiff_t>((sites.size() + kReduceBlock - 1) / kReduceBlock);
    std::vector<Accumulator> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t end   = std::min(begin + kReduceBlock, sites.size());
        for (std::size_t i = begin; i < end; ++i) partial[static_cast<std::size_t>(b)].add(sites[i]);
    }
    Accumulator total;
    for (const auto &p : partial) total.add(p);
    return total.matrix();
}

ComplexMatrix reduce_coin_matrix_serial(const WalkState &state) {
    Accumulator total;
    for (const auto &s : state.sites()) total.add(s);
    return total.matrix();
}

} // namespace qthermo
