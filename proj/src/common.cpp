#include "qthermo/error.hpp"
#include "qthermo/tolerances.hpp"

namespace qthermo {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::BlochOutOfBall: return "BlochOutOfBall";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularM: return "SingularM";
    case ErrorCode::ZeroW: return "ZeroW";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::ZeroPopulation: return "ZeroPopulation";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::LatticeTooSmall: return "LatticeTooSmall";
    case ErrorCode::BoundaryOverflow: return "BoundaryOverflow";
    case ErrorCode::OutOfPhysicalRange: return "OutOfPhysicalRange";
    case ErrorCode::InfiniteT: return "InfiniteT";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {

template <class Self, class Fn>
void visit_fields(Self &t, Fn &&fn) {
    fn("hermitian", t.hermitian);
    fn("degeneracy_gap", t.degeneracy_gap);
    fn("singular_pivot", t.singular_pivot);
    fn("solve_residual", t.solve_residual);
    fn("trace", t.trace);
    fn("positivity", t.positivity);
    fn("bloch_radius", t.bloch_radius);
    fn("diagonal_real", t.diagonal_real);
    fn("pure_eigenvalue", t.pure_eigenvalue);
    fn("mixed_eigenvalue", t.mixed_eigenvalue);
    fn("qubit_tie", t.qubit_tie);
    fn("singular_m", t.singular_m);
    fn("diagonal_tie", t.diagonal_tie);
    fn("entropy_cutoff", t.entropy_cutoff);
    fn("zero_population", t.zero_population);
    fn("coin_normalization", t.coin_normalization);
    fn("populations_sum", t.populations_sum);
}

} // namespace

std::map<std::string, double> Tolerances::as_map() const {
    std::map<std::string, double> out;
    visit_fields(*this, [&](const char *name, double value) { out.emplace(name, value); });
    return out;
}

void Tolerances::set(const std::string &name, double value) {
    bool found = false;
    visit_fields(*this, [&](const char *field, double &slot) {
        if (name == field) {
            slot  = value;
            found = true;
        }
    });
    if (!found) throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
    if (!(value >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance '" + name + "' must be non-negative");
}

} // namespace qthermo
