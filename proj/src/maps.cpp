#include "instab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "instab/charsolver.hpp"

namespace instab {

namespace {

constexpr double kKnee = 0.36787944117144233;  // 1/e

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void wrong_state(const char* tag) {
    throw Error(std::string("apply: state type incompatible with map ") + tag);
}

// The window truncation must stay provably inactive: mass reaching the
// boundary is an error, not a warning.
void assert_support_interior(const GridFunction1D& g, const char* tag) {
    const auto supp = support_interval(g, 0.0);
    if (!supp) return;
    const double dx = g.dx();
    if (supp->lo < g.lo + dx || supp->hi > g.hi - dx)
        throw SupportError(std::string(tag) + ": support reached the window boundary");
}

} // namespace

double BumpFn::operator()(double x) const {
    const double t = x / a;
    const double d = 1.0 - t * t;
    if (d <= 0.0) return 0.0;
    return b * std::exp(1.0 - 1.0 / d);
}

ShiftFn ShiftFn::log_kind(double C) {
    if (!(C > 0.0)) throw Error("ShiftFn: C must be positive");
    ShiftFn h;
    h.kind = Kind::Log;
    h.C = C;
    return h;
}

ShiftFn ShiftFn::power(double q) {
    if (!(q > 0.0)) throw Error("ShiftFn: exponent must be positive");
    ShiftFn h;
    h.kind = Kind::Power;
    h.q = q;
    return h;
}

ShiftFn ShiftFn::from_table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw Error("ShiftFn: table needs at least 2 knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i].first <= knots[i - 1].first || knots[i].second <= knots[i - 1].second)
            throw Error("ShiftFn: table must be strictly increasing");
    }
    if (!(knots.front().first >= 0.0 && knots.front().second >= 0.0))
        throw Error("ShiftFn: table must be nonnegative");
    ShiftFn h;
    h.kind = Kind::Table;
    h.table = std::move(knots);
    return h;
}

double ShiftFn::operator()(double s) const {
    if (s <= 0.0) return 0.0;
    switch (kind) {
        case Kind::Log: {
            if (s < kKnee) return C / std::abs(std::log(s));
            return C + C * std::exp(1.0) * (s - kKnee);
        }
        case Kind::Power:
            return std::pow(s, q);
        case Kind::Table: {
            if (s <= table.front().first) {
                const double t0 = table.front().first;
                return t0 > 0.0 ? table.front().second * (s / t0) : table.front().second;
            }
            auto it = std::upper_bound(table.begin(), table.end(), s,
                                       [](double x, const auto& kv) { return x < kv.first; });
            if (it == table.end()) {
                const auto& p1 = table[table.size() - 2];
                const auto& p2 = table.back();
                const double slope = (p2.second - p1.second) / (p2.first - p1.first);
                return p2.second + slope * (s - p2.first);
            }
            const auto& hi2 = *it;
            const auto& lo2 = *(it - 1);
            const double th = (s - lo2.first) / (hi2.first - lo2.first);
            return (1.0 - th) * lo2.second + th * hi2.second;
        }
    }
    return 0.0;
}

double norm(const State& u, NormKind kind) {
    return std::visit(overloaded{
                          [&](double x) {
                              if (kind != NormKind::Sup && kind != NormKind::L2 &&
                                  kind != NormKind::SeqL2)
                                  throw Error("norm: kind incompatible with scalar state");
                              return std::abs(x);
                          },
                          [&](const PlanarPoint& p) { return norm(p, kind); },
                          [&](const SeqVector& v) { return norm(v, kind); },
                          [&](const GridFunction1D& f) { return norm(f, kind); },
                      },
                      u);
}

const char* map_tag(const MapSpec& spec) {
    return std::visit(overloaded{
                          [](const Jordan2DMap&) { return "jordan2d"; },
                          [](const ShiftMultMap&) { return "shift_mult"; },
                          [](const TranslateMultMap& m) {
                              return m.dilate ? "translate_mult_dilate" : "translate_mult";
                          },
                          [](const ContractSupportMap&) { return "contract_support"; },
                          [](const Discont2DMap&) { return "discont2d"; },
                          [](const ScalarAlphaMap&) { return "scalar_alpha"; },
                          [](const ConservationLawMap&) { return "conservation_law"; },
                      },
                      spec);
}

NormKind state_norm_kind(const MapSpec& spec) {
    return std::visit(overloaded{
                          [](const Jordan2DMap&) { return NormKind::PlanarMix; },
                          [](const ShiftMultMap&) { return NormKind::SeqL2; },
                          [](const TranslateMultMap&) { return NormKind::L2; },
                          [](const ContractSupportMap&) { return NormKind::Sup; },
                          [](const Discont2DMap&) { return NormKind::PlanarMix; },
                          [](const ScalarAlphaMap&) { return NormKind::Sup; },
                          [](const ConservationLawMap&) { return NormKind::Sup; },
                      },
                      spec);
}

double state_norm(const MapSpec& spec, const State& u) {
    return norm(u, state_norm_kind(spec));
}

State apply(const MapSpec& spec, const State& u) {
    return std::visit(
        overloaded{
            [&](const Jordan2DMap&) -> State {
                const auto* p = std::get_if<PlanarPoint>(&u);
                if (!p) wrong_state("jordan2d");
                return PlanarPoint{p->v + p->w - p->v * p->v * p->v,
                                   p->w - p->w * p->w * p->w};
            },
            [&](const ShiftMultMap& m) -> State {
                const auto* v = std::get_if<SeqVector>(&u);
                if (!v) wrong_state("shift_mult");
                const double nrm = norm(*v);
                SeqVector shifted = apply_weighted_shift(WeightedShift{m.weights}, *v);
                const double factor = 1.0 - std::pow(nrm, m.p);
                return scaled(shifted, factor);
            },
            [&](const TranslateMultMap& m) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("translate_mult");
                const double s = m.h(norm(*f, NormKind::L2));
                GridFunction1D g = m.dilate ? dilate_translate(*f, 2.0, s) : translate(*f, s);
                for (std::size_t i = 0; i < g.size(); ++i) g.values[i] *= m.chi(g.x_at(i));
                assert_support_interior(g, map_tag(spec));
                return g;
            },
            [&](const ContractSupportMap&) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("contract_support");
                if (!f->is_c0_state())
                    throw Error("contract_support: state must live in C0_0([-1,0])");
                const double sup = norm(*f, NormKind::Sup);
                // A lone sample at the right endpoint with shift below one
                // cell is absorbing on the grid: the support halving is
                // sub-cell and resampling undoes it. The discretization is
                // no longer faithful there.
                const auto supp = support_interval(*f, 0.0);
                if (supp && supp->length() == 0.0 && supp->hi == f->hi &&
                    sup * sup < f->dx())
                    throw SupportError(
                        "contract_support: support contraction stalled at grid resolution");
                GridFunction1D g = dilate_translate(*f, 2.0, sup * sup);
                for (double& x : g.values) x *= 2.0;
                return g;
            },
            [&](const Discont2DMap&) -> State {
                const auto* p = std::get_if<PlanarPoint>(&u);
                if (!p) wrong_state("discont2d");
                // membership is strict on both sides: w = 0 and |w| = v^2 lie in D^c
                const bool in_D = 0.0 < std::abs(p->w) && std::abs(p->w) < p->v * p->v;
                return PlanarPoint{in_D ? 0.0 : 2.0 * p->v,
                                   p->w / 2.0 + p->v * p->v / 4.0};
            },
            [&](const ScalarAlphaMap& m) -> State {
                const auto* x = std::get_if<double>(&u);
                if (!x) wrong_state("scalar_alpha");
                return m.rho * (*x) - m.alpha(std::abs(*x)) * (*x);
            },
            [&](const ConservationLawMap&) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("conservation_law");
                return time_one_map(*f);
            },
        },
        spec);
}

State linearized_apply(const MapSpec& spec, const State& u) {
    return std::visit(
        overloaded{
            [&](const Jordan2DMap&) -> State {
                const auto* p = std::get_if<PlanarPoint>(&u);
                if (!p) wrong_state("jordan2d");
                return PlanarPoint{p->v + p->w, p->w};
            },
            [&](const ShiftMultMap& m) -> State {
                const auto* v = std::get_if<SeqVector>(&u);
                if (!v) wrong_state("shift_mult");
                return apply_weighted_shift(WeightedShift{m.weights}, *v);
            },
            [&](const TranslateMultMap& m) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("translate_mult");
                GridFunction1D g = m.dilate ? dilate_translate(*f, 2.0, 0.0) : *f;
                for (std::size_t i = 0; i < g.size(); ++i) g.values[i] *= m.chi(g.x_at(i));
                return g;
            },
            [&](const ContractSupportMap&) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("contract_support");
                if (!f->is_c0_state())
                    throw Error("contract_support: state must live in C0_0([-1,0])");
                GridFunction1D g = dilate_translate(*f, 2.0, 0.0);
                for (double& x : g.values) x *= 2.0;
                return g;
            },
            [&](const Discont2DMap&) -> State {
                const auto* p = std::get_if<PlanarPoint>(&u);
                if (!p) wrong_state("discont2d");
                return PlanarPoint{2.0 * p->v, p->w / 2.0};
            },
            [&](const ScalarAlphaMap& m) -> State {
                const auto* x = std::get_if<double>(&u);
                if (!x) wrong_state("scalar_alpha");
                return m.rho * (*x);
            },
            [&](const ConservationLawMap&) -> State {
                const auto* f = std::get_if<GridFunction1D>(&u);
                if (!f) wrong_state("conservation_law");
                return linearized_time_one_map(*f);
            },
        },
        spec);
}

double GallunShifts::S(std::size_t j, std::size_t n) const {
    if (j > n || n >= cumulative.size())
        throw Error("GallunShifts: indices out of range");
    return cumulative[n] - cumulative[j];
}

GallunShifts gallun_shift_sums(const TranslateMultMap& map, std::span<const double> norms) {
    GallunShifts g;
    g.cumulative.resize(norms.size() + 1, 0.0);
    for (std::size_t l = 0; l < norms.size(); ++l)
        g.cumulative[l + 1] = g.cumulative[l] + map.h(norms[l]);
    return g;
}

std::size_t big_set_cardinality(std::span<const double> norms, double eps) {
    if (!(eps > 0.0)) throw Error("big_set_cardinality: eps must be positive");
    std::size_t count = 0;
    for (std::size_t n = 1; n < norms.size(); ++n)
        if (norms[n] >= eps) ++count;
    return count;
}

} // namespace instab
