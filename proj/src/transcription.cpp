#include "knotfield/transcription.hpp"

#include "knotfield/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace knotfield {

namespace {

constexpr double kSingularDenominator = 1e-6;

std::string number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string square(const Affine& a) {
    if (a.offset == 0.0) {
        return std::string(1, axis_name(a.var)) + "^2";
    }
    return "(" + number(a.offset) + "-" + axis_name(a.var) + ")^2";
}

}  // namespace

std::string Affine::str() const {
    const std::string v(1, axis_name(var));
    if (coeff < 0.0) {
        return offset == 0.0 ? "-" + v : "(" + number(offset) + "-" + v + ")";
    }
    if (offset == 0.0) {
        return v;
    }
    return "-(" + number(-offset) + "-" + v + ")";
}

double PrintedTerm::evaluate(const Vec3& p) const {
    const double d0 = denominator[0](p);
    const double d1 = denominator[1](p);
    const double den = d0 * d0 + d1 * d1;
    double radicands[2];
    for (int k = 0; k < 2; ++k) {
        double s = 0.0;
        for (const auto& r : bracket[k].radicand) {
            s += r(p) * r(p);
        }
        radicands[k] = s;
    }
    if (den < kSingularDenominator || radicands[0] < kSingularDenominator ||
        radicands[1] < kSingularDenominator) {
        std::ostringstream os;
        os << "printed term " << "xyz"[component] << index << " is singular at " << p;
        throw OnConductorError(os.str(), 0);
    }
    const double br = bracket[0].numerator(p) / std::sqrt(radicands[0]) -
                      bracket[1].numerator(p) / std::sqrt(radicands[1]);
    return static_cast<double>(sign) * numerator(p) / den * br;
}

std::string PrintedTerm::str() const {
    std::ostringstream os;
    os << (sign < 0 ? "-" : (mark == SignMark::Explicit ? "+" : "")) << numerator.str() << "/("
       << square(denominator[0]) << " + " << square(denominator[1]) << ") [";
    for (int k = 0; k < 2; ++k) {
        const auto& b = bracket[k];
        os << (k ? " - " : "") << b.numerator.str() << "/sqrt(" << square(b.radicand[0]) << " + "
           << square(b.radicand[1]) << " + " << square(b.radicand[2]) << ")";
    }
    os << "]";
    return os.str();
}

FieldVector TranscribedField::evaluate(const Vec3& p) const {
    FieldVector b{};
    for (const auto& t : terms) {
        b[t.component] += t.evaluate(p);
    }
    return b;
}

std::array<std::size_t, 3> TranscribedField::terms_per_component() const {
    std::array<std::size_t, 3> n{};
    for (const auto& t : terms) {
        ++n[static_cast<std::size_t>(t.component)];
    }
    return n;
}

namespace {

constexpr Axis X = Axis::X;
constexpr Axis Y = Axis::Y;
constexpr Axis Z = Axis::Z;

// (c - v)
constexpr Affine A(double c, Axis v) { return {c, -1.0, v}; }
// v
constexpr Affine V(Axis v) { return {0.0, 1.0, v}; }
// -v
constexpr Affine NV(Axis v) { return {0.0, -1.0, v}; }
// -(c - v)
constexpr Affine NA(double c, Axis v) { return {-c, 1.0, v}; }

constexpr SignMark E = SignMark::Explicit;
constexpr SignMark L = SignMark::Leading;
constexpr SignMark M = SignMark::Missing;

struct TermBuilder {
    int component;
    std::vector<PrintedTerm>& out;

    void operator()(int sign, SignMark mark, Affine num, Affine d0, Affine d1, Affine n0,
                    std::array<Affine, 3> r0, Affine n1, std::array<Affine, 3> r1,
                    std::string note = {}) {
        PrintedTerm t;
        t.index = static_cast<int>(std::count_if(out.begin(), out.end(), [&](const PrintedTerm& o) {
                      return o.component == component;
                  })) + 1;
        t.component = component;
        t.sign = sign;
        t.mark = mark;
        t.numerator = num;
        t.denominator = {d0, d1};
        t.bracket = {BracketPart{n0, r0}, BracketPart{n1, r1}};
        t.note = std::move(note);
        out.push_back(std::move(t));
    }
};

TranscribedField build_trefoil() {
    TranscribedField f{"3_1", {}};
    auto& t = f.terms;

    TermBuilder bx{0, t};
    bx(-1, E, V(Z), A(6, X), A(0, Z), A(4, Y), {A(6, X), A(4, Y), A(0, Z)}, A(2, Y), {A(6, X), A(2, Y), A(0, Z)});
    bx(-1, E, A(4, Y), A(6, X), A(4, Y), A(4, Z), {A(6, X), A(4, Y), A(4, Z)}, NV(Z), {A(6, X), A(4, Y), A(0, Z)});
    bx(+1, E, A(4, Z), A(0, X), A(4, Z), NV(Y), {A(0, X), A(0, Y), A(4, Z)}, A(4, Y), {A(0, X), A(4, Y), A(4, Z)});
    bx(+1, E, A(2, Z), A(4, X), A(2, Z), A(6, Y), {A(4, X), A(6, Y), A(2, Z)}, NV(Y), {A(4, X), A(0, Y), A(2, Z)});
    bx(-1, E, A(6, Y), A(4, X), A(6, Y), A(6, Z), {A(4, X), A(6, Y), A(6, Z)}, A(2, Z), {A(4, X), A(6, Y), A(2, Z)});
    bx(+1, E, A(6, Z), A(2, X), A(6, Z), A(2, Y), {A(2, X), A(2, Y), A(6, Z)}, A(6, Y), {A(2, X), A(6, Y), A(6, Z)});
    bx(-1, E, A(2, Y), A(2, X), A(2, Y), NV(Z), {A(2, X), A(2, Y), A(0, Z)}, A(6, Z), {A(2, X), A(2, Y), A(6, Z)});
    bx(+1, E, V(Y), A(0, X), A(0, Y), A(2, Z), {A(0, X), A(0, Y), A(2, Z)}, A(4, Z), {A(0, X), A(0, Y), A(4, Z)});

    TermBuilder by{1, t};
    by(+1, L, V(Z), A(2, Y), A(0, Z), A(6, X), {A(6, X), A(2, Y), A(0, Z)}, A(2, X), {A(2, X), A(2, Y), A(0, Z)});
    by(+1, E, A(6, X), A(6, X), A(4, Y), A(4, Z), {A(6, X), A(4, Y), A(4, Z)}, NV(Z), {A(6, X), A(4, Y), A(0, Z)});
    by(-1, E, A(4, Z), A(4, Y), A(4, Z), A(6, X), {A(6, X), A(4, Y), A(4, Z)}, NV(X), {A(0, X), A(4, Y), A(4, Z)},
       "second bracket numerator printed as \"-x)\" (unbalanced parenthesis)");
    by(+1, M, NV(X), A(0, X), A(0, Y), A(2, Z), {A(0, X), A(0, Y), A(2, Z)}, A(4, Z), {A(0, X), A(0, Y), A(4, Z)});
    by(-1, E, A(2, Z), A(0, Y), A(2, Z), A(4, X), {A(4, X), A(0, Y), A(2, Z)}, NV(X), {A(0, X), A(0, Y), A(2, Z)});
    by(+1, E, A(4, X), A(4, X), A(6, Y), A(6, Z), {A(4, X), A(6, Y), A(6, Z)}, A(2, Z), {A(4, X), A(6, Y), A(2, Z)});
    by(-1, E, A(6, Z), A(6, Y), A(6, Z), A(2, X), {A(2, X), A(6, Y), A(6, Z)}, A(4, X), {A(4, X), A(6, Y), A(6, Z)});
    by(+1, E, A(2, X), A(2, X), A(2, Y), NV(Z), {A(2, X), A(2, Y), A(0, Z)}, A(6, Z), {A(2, X), A(2, Y), A(6, Z)});

    TermBuilder bz{2, t};
    bz(+1, L, A(2, Y), A(2, Y), A(0, Z), A(6, X), {A(6, X), A(2, Y), A(0, Z)}, A(2, X), {A(2, X), A(2, Y), A(0, Z)});
    bz(-1, E, A(6, X), A(6, X), A(0, Z), A(4, Y), {A(6, X), A(4, Y), A(0, Z)}, NA(2, Y), {A(6, X), A(2, Y), A(0, Z)},
       "second bracket numerator printed as \"-(2-y)\"");
    bz(+1, M, A(4, Y), A(4, Y), A(4, Z), A(6, X), {A(6, X), A(4, Y), A(4, Z)}, NV(X), {A(0, X), A(4, Y), A(4, Z)},
       "second bracket numerator printed as \"-x)\" (unbalanced parenthesis)");
    bz(+1, M, V(X), A(0, X), A(4, Z), NV(Y), {A(0, X), A(0, Y), A(4, Z)}, A(4, Y), {A(0, X), A(4, Y), A(4, Z)});
    bz(-1, E, V(Y), A(0, Y), A(2, Z), A(4, X), {A(4, X), A(0, Y), A(2, Z)}, NV(X), {A(0, X), A(0, Y), A(2, Z)});
    bz(-1, E, A(4, X), A(4, X), A(2, Z), A(6, Y), {A(4, X), A(6, Y), A(2, Z)}, NV(Y), {A(4, X), A(0, Y), A(2, Z)});
    bz(+1, E, A(6, Y), A(6, Y), A(6, Z), A(2, X), {A(2, X), A(6, Y), A(6, Z)}, A(4, X), {A(4, X), A(6, Y), A(6, Z)});
    bz(-1, E, A(2, X), A(2, X), A(6, Z), A(2, Y), {A(2, X), A(2, Y), A(6, Z)}, A(6, Y), {A(2, X), A(6, Y), A(6, Z)});
    return f;
}

TranscribedField build_figure_eight() {
    TranscribedField f{"4_1", {}};
    auto& t = f.terms;

    TermBuilder bx{0, t};
    bx(-1, E, V(Z), A(4, X), A(0, Z), A(6, Y), {A(4, X), A(6, Y), A(0, Z)}, A(2, Y), {A(4, X), A(2, Y), A(0, Z)});
    bx(-1, E, A(6, Y), A(4, X), A(6, Y), A(4, Z), {A(4, X), A(6, Y), A(4, Z)}, NV(Z), {A(4, X), A(6, Y), A(0, Z)});
    bx(+1, E, A(4, Z), A(4, X), A(4, Z), NV(Y), {A(4, X), A(0, Y), A(4, Z)}, A(6, Y), {A(4, X), A(6, Y), A(4, Z)});
    bx(+1, E, A(4, Z), A(0, X), A(4, Z), A(8, Y), {A(0, X), A(8, Y), A(4, Z)}, NV(Y), {A(0, X), A(0, Y), A(4, Z)});
    bx(-1, E, A(8, Y), A(6, X), A(8, Y), A(2, Z), {A(6, X), A(8, Y), A(2, Z)}, A(4, Z), {A(6, X), A(8, Y), A(4, Z)});
    bx(+1, E, A(2, Z), A(6, X), A(2, Z), A(8, Y), {A(6, X), A(8, Y), A(2, Z)}, A(4, Y), {A(6, X), A(4, Y), A(2, Z)});
    bx(+1, E, A(2, Z), A(2, X), A(2, Z), A(8, Y), {A(2, X), A(8, Y), A(2, Z)}, A(4, Y), {A(2, X), A(4, Y), A(2, Z)});
    bx(-1, E, A(10, Y), A(2, X), A(10, Y), A(6, Z), {A(2, X), A(10, Y), A(6, Z)}, A(2, Z), {A(2, X), A(10, Y), A(2, Z)});
    bx(+1, E, A(6, Z), A(2, X), A(6, Z), A(10, Y), {A(2, X), A(10, Y), A(6, Z)}, A(2, Y), {A(2, X), A(2, Y), A(6, Z)});
    bx(-1, E, A(2, Y), A(2, X), A(2, Y), NV(Z), {A(2, X), A(2, Y), A(0, Z)}, A(6, Z), {A(2, X), A(2, Y), A(6, Z)});

    TermBuilder by{1, t};
    by(-1, E, V(Z), A(2, Y), A(0, Z), A(4, X), {A(4, X), A(2, Y), A(0, Z)}, A(2, X), {A(2, X), A(2, Y), A(0, Z)});
    by(+1, E, A(4, X), A(4, X), A(6, Y), A(4, Z), {A(4, X), A(6, Y), A(4, Z)}, NV(Z), {A(4, X), A(6, Y), A(0, Z)});
    by(-1, E, A(4, Z), A(0, Y), A(4, Z), NV(X), {A(0, X), A(0, Y), A(4, Z)}, A(4, X), {A(4, X), A(0, Y), A(4, Z)});
    by(+1, M, NA(4, Z), A(8, Y), A(4, Z), A(6, X), {A(6, X), A(8, Y), A(4, Z)}, NV(X), {A(0, X), A(8, Y), A(4, Z)});
    by(+1, E, A(6, X), A(6, X), A(8, Y), A(2, Z), {A(6, X), A(8, Y), A(2, Z)}, A(4, Z), {A(6, X), A(8, Y), A(4, Z)});
    by(-1, E, A(2, Z), A(4, Y), A(2, Z), A(2, X), {A(2, X), A(4, Y), A(2, Z)}, A(6, X), {A(6, X), A(4, Y), A(2, Z)});
    by(+1, M, A(2, X), A(2, X), A(10, Y), A(6, Z), {A(2, X), A(10, Y), A(6, Z)}, A(2, Z), {A(2, X), A(10, Y), A(2, Z)});
    by(+1, E, A(2, X), A(2, X), A(2, Y), A(6, Z), {A(2, X), A(2, Y), A(6, Z)}, A(2, Z), {A(2, X), A(2, Y), A(2, Z)});

    TermBuilder bz{2, t};
    bz(+1, L, A(2, Y), A(2, Y), A(0, Z), A(4, X), {A(4, X), A(2, Y), A(0, Z)}, A(2, X), {A(2, X), A(2, Y), A(0, Z)});
    bz(-1, E, A(4, X), A(4, X), A(0, Z), A(6, Y), {A(4, X), A(6, Y), A(0, Z)}, A(2, Y), {A(6, X), A(2, Y), A(0, Z)},
       "second radicand printed with (6-x)^2");
    bz(-1, E, A(4, X), A(4, X), A(4, Z), NV(Y), {A(4, X), A(0, Y), A(4, Z)}, A(6, Y), {A(4, X), A(6, Y), A(4, Z)});
    bz(-1, E, V(Y), A(0, Y), A(4, Z), NV(X), {A(0, X), A(0, Y), A(4, Z)}, A(4, X), {A(4, X), A(0, Y), A(4, Z)});
    bz(+1, E, V(X), A(0, X), A(4, Z), A(8, Y), {A(0, X), A(8, Y), A(4, Z)}, NV(Y), {A(0, X), A(0, Y), A(4, Z)});
    bz(+1, E, A(8, Y), A(8, Y), A(4, Z), A(6, X), {A(6, X), A(8, Y), A(4, Z)}, NV(X), {A(0, X), A(8, Y), A(4, Z)});
    bz(-1, E, A(6, X), A(6, X), A(2, Z), A(4, Y), {A(6, X), A(4, Y), A(2, Z)}, A(8, Y), {A(6, X), A(8, Y), A(2, Z)});
    bz(+1, E, A(4, Y), A(4, Y), A(2, Z), A(2, X), {A(2, X), A(4, Y), A(2, Z)}, A(6, X), {A(6, X), A(4, Y), A(2, Z)});
    bz(-1, E, A(2, X), A(2, X), A(2, Z), A(8, Y), {A(2, X), A(8, Y), A(2, Z)}, A(4, Y), {A(2, X), A(4, Y), A(2, Z)});
    bz(-1, E, A(2, X), A(2, X), A(6, Z), A(2, Y), {A(2, X), A(2, Y), A(6, Z)}, A(10, Y), {A(2, X), A(10, Y), A(6, Z)});
    return f;
}

}  // namespace

const TranscribedField& transcribed_field(std::string_view label) {
    static const TranscribedField trefoil = build_trefoil();
    static const TranscribedField figure_eight = build_figure_eight();
    if (label == "3_1") {
        return trefoil;
    }
    if (label == "4_1") {
        return figure_eight;
    }
    throw std::invalid_argument("no transcription for knot '" + std::string(label) + "'");
}

FieldVector eval_transcribed(std::string_view label, const Vec3& p) {
    return transcribed_field(label).evaluate(p);
}

TranscribedField terms_from_knot(const LatticeKnot& knot) {
    TranscribedField f{knot.name(), {}};
    for (const auto& seg : segments(knot)) {
        const int a = axis_index(seg.axis());
        // Cyclic successors: e_a x e_b = e_c.
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        const auto ax = static_cast<Axis>(a);
        const auto bx = static_cast<Axis>(b);
        const auto cx = static_cast<Axis>(c);
        const double fb = static_cast<double>(seg.start()[b]);
        const double fc = static_cast<double>(seg.start()[c]);
        const auto range = seg.axial_range();
        const double lo = static_cast<double>(range[0]);
        const double hi = static_cast<double>(range[1]);
        const int s = seg.direction_sign();

        std::array<Affine, 2> den;
        den[std::min(b, c) == b ? 0 : 1] = A(fb, bx);
        den[std::min(b, c) == b ? 1 : 0] = A(fc, cx);
        auto radicand = [&](double end) {
            std::array<Affine, 3> r;
            r[static_cast<std::size_t>(a)] = A(end, ax);
            r[static_cast<std::size_t>(b)] = A(fb, bx);
            r[static_cast<std::size_t>(c)] = A(fc, cx);
            return r;
        };
        const std::array<BracketPart, 2> bracket = {BracketPart{A(hi, ax), radicand(hi)},
                                                    BracketPart{A(lo, ax), radicand(lo)}};

        // (u x rho)_c = s (b - fb) = -s (fb - b); (u x rho)_b = -s (c - fc) = s (fc - c)
        PrintedTerm tc;
        tc.component = c;
        tc.sign = -s;
        tc.numerator = A(fb, bx);
        tc.denominator = den;
        tc.bracket = bracket;
        PrintedTerm tb = tc;
        tb.component = b;
        tb.sign = s;
        tb.numerator = A(fc, cx);
        f.terms.push_back(tb);
        f.terms.push_back(tc);
    }
    std::stable_sort(f.terms.begin(), f.terms.end(),
                     [](const PrintedTerm& l, const PrintedTerm& r) { return l.component < r.component; });
    std::array<int, 3> counter{};
    for (auto& t : f.terms) {
        t.index = ++counter[static_cast<std::size_t>(t.component)];
        if (t.index == 1) {
            t.mark = t.sign < 0 ? SignMark::Explicit : SignMark::Leading;
        }
    }
    return f;
}

std::string_view term_status_name(TermStatus s) {
    switch (s) {
        case TermStatus::Match: return "match";
        case TermStatus::SignFlipped: return "sign-flipped";
        case TermStatus::Mismatch: return "mismatch";
        case TermStatus::Unmatched: return "unmatched";
    }
    return "unknown";
}

std::size_t DiscrepancyLedger::count(TermStatus s) const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [s](const LedgerEntry& e) { return e.status == s; }));
}

std::size_t DiscrepancyLedger::flagged() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const LedgerEntry& e) { return e.flagged(); }));
}

std::size_t DiscrepancyLedger::matched_by_structure() const {
    return entries.size() - count(TermStatus::Unmatched);
}

namespace {

struct Line {
    int axis;  // direction of the line
    std::array<double, 3> fixed;
};

// The two squared expressions of a field denominator name the two fixed
// coordinates of the segment's line.
bool line_from_denominator(const std::array<Affine, 2>& den, Line& line) {
    const int v0 = axis_index(den[0].var);
    const int v1 = axis_index(den[1].var);
    if (v0 == v1 || den[0].coeff == 0.0 || den[1].coeff == 0.0) {
        return false;
    }
    line.axis = 3 - v0 - v1;
    line.fixed = {0.0, 0.0, 0.0};
    line.fixed[static_cast<std::size_t>(v0)] = den[0].root();
    line.fixed[static_cast<std::size_t>(v1)] = den[1].root();
    return true;
}

bool same_line(const Affine& a, const Affine& b) {
    return a.var == b.var && a.coeff != 0.0 && b.coeff != 0.0 && a.root() == b.root();
}

bool radicand_consistent(const PrintedTerm& t, const BracketPart& part) {
    std::array<Affine, 3> expected = {t.denominator[0], t.denominator[1], part.numerator};
    std::array<bool, 3> used{};
    for (const auto& r : part.radicand) {
        bool found = false;
        for (std::size_t k = 0; k < 3; ++k) {
            if (!used[k] && same_line(r, expected[k])) {
                used[k] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

}  // namespace

DiscrepancyLedger discrepancy_ledger(const TranscribedField& printed, const LatticeKnot& knot,
                                     std::size_t points, std::uint64_t seed) {
    DiscrepancyLedger ledger;
    ledger.label = printed.label;
    const KnotField field(knot);
    const auto& segs = field.segments();

    // Sample points clear of the circuit and of every printed singularity.
    std::mt19937_64 rng(seed);
    const auto box = knot.bounding_box();
    std::uniform_real_distribution<double> ux(box[0].x - 2.0, box[1].x + 2.0);
    std::uniform_real_distribution<double> uy(box[0].y - 2.0, box[1].y + 2.0);
    std::uniform_real_distribution<double> uz(box[0].z - 2.0, box[1].z + 2.0);
    std::vector<Vec3> samples;
    std::size_t attempts = 0;
    while (samples.size() < points && attempts < 1000 * (points + 1)) {
        ++attempts;
        const Vec3 p{ux(rng), uy(rng), uz(rng)};
        if (field.clearance(p) < 0.25) {
            continue;
        }
        try {
            for (const auto& t : printed.terms) {
                (void)t.evaluate(p);
            }
        } catch (const OnConductorError&) {
            continue;
        }
        samples.push_back(p);
    }
    ledger.sample_points = samples.size();

    std::vector<std::size_t> coverage(segs.size(), 0);
    for (const auto& t : printed.terms) {
        LedgerEntry e;
        e.index = t.index;
        e.component = t.component;
        if (t.mark == SignMark::Missing) {
            e.remarks.push_back("no leading sign printed (read as +)");
        }
        if (!t.note.empty()) {
            e.remarks.push_back(t.note);
        }
        for (int k = 0; k < 2; ++k) {
            if (!radicand_consistent(t, t.bracket[static_cast<std::size_t>(k)])) {
                e.remarks.push_back("radicand of bracket part " + std::to_string(k + 1) +
                                    " disagrees with the denominator and its numerator");
            }
        }

        Line line{};
        const Segment* match = nullptr;
        if (line_from_denominator(t.denominator, line)) {
            for (const auto& seg : segs) {
                if (axis_index(seg.axis()) != line.axis) {
                    continue;
                }
                bool on_line = true;
                for (int i = 0; i < 3; ++i) {
                    if (i != line.axis &&
                        static_cast<double>(seg.start()[i]) != line.fixed[static_cast<std::size_t>(i)]) {
                        on_line = false;
                    }
                }
                if (on_line) {
                    match = &seg;
                    break;
                }
            }
        } else {
            e.remarks.push_back("denominator does not name a coordinate line");
        }

        if (match == nullptr) {
            e.status = TermStatus::Unmatched;
            ledger.entries.push_back(std::move(e));
            continue;
        }
        e.segment = match->index();
        ++coverage[match->index() - 1];

        const auto range = match->axial_range();
        std::set<double> printed_ends;
        bool ends_on_axis = true;
        for (const auto& part : t.bracket) {
            if (axis_index(part.numerator.var) != line.axis) {
                ends_on_axis = false;
            }
            printed_ends.insert(part.numerator.root());
        }
        const std::set<double> actual_ends = {static_cast<double>(range[0]),
                                              static_cast<double>(range[1])};
        if (!ends_on_axis || printed_ends != actual_ends) {
            std::ostringstream os;
            os << "bracket endpoints {";
            bool first = true;
            for (double v : printed_ends) {
                os << (first ? "" : ",") << v;
                first = false;
            }
            os << "} differ from segment range [" << range[0] << "," << range[1] << "] along "
               << axis_name(match->axis());
            e.remarks.push_back(os.str());
        }

        double max_same = 0.0;
        double max_flip = 0.0;
        double scale = 0.0;
        for (const auto& p : samples) {
            const double engine = segment_field(*match, p, 1.0)[t.component];
            const double term = t.evaluate(p);
            max_same = std::max(max_same, std::fabs(term - engine));
            max_flip = std::max(max_flip, std::fabs(term + engine));
            scale = std::max(scale, std::fabs(engine));
        }
        const double tol = 1e-9 * (1.0 + scale);
        if (max_same <= tol) {
            e.status = TermStatus::Match;
            e.max_abs_difference = max_same;
        } else if (max_flip <= tol) {
            e.status = TermStatus::SignFlipped;
            e.max_abs_difference = max_same;
        } else {
            e.status = TermStatus::Mismatch;
            e.max_abs_difference = max_same;
        }
        ledger.entries.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < coverage.size(); ++i) {
        if (coverage[i] != 2) {
            ledger.uncovered_segments.push_back(i + 1);
        }
    }
    return ledger;
}

DiscrepancyLedger discrepancy_ledger(std::string_view label, std::size_t points, std::uint64_t seed) {
    return discrepancy_ledger(transcribed_field(label), canonical_knot(label), points, seed);
}

std::string DiscrepancyLedger::to_text() const {
    static constexpr const char* kComponent[] = {"Bx", "By", "Bz"};
    std::ostringstream os;
    os << "transcription ledger for " << label << " (" << entries.size() << " terms, "
       << sample_points << " sample points)\n";
    for (const auto& e : entries) {
        os << "  " << kComponent[e.component] << " term " << e.index << ", segment " << e.segment
           << ": " << term_status_name(e.status);
        if (e.status != TermStatus::Match && e.status != TermStatus::Unmatched) {
            os << " (max |diff| " << e.max_abs_difference << ")";
        }
        os << '\n';
        for (const auto& r : e.remarks) {
            os << "      - " << r << '\n';
        }
    }
    os << "matched by denominator: " << matched_by_structure() << '/' << entries.size()
       << ", exact: " << count(TermStatus::Match)
       << ", sign-flipped: " << count(TermStatus::SignFlipped)
       << ", mismatch: " << count(TermStatus::Mismatch)
       << ", unmatched: " << count(TermStatus::Unmatched) << ", flagged: " << flagged() << '\n';
    if (!uncovered_segments.empty()) {
        os << "segments without exactly two terms:";
        for (auto s : uncovered_segments) {
            os << ' ' << s;
        }
        os << '\n';
    }
    return os.str();
}

std::string DiscrepancyLedger::to_json() const {
    nlohmann::json j;
    j["knot"] = label;
    j["sample_points"] = sample_points;
    j["terms"] = entries.size();
    j["matched_by_denominator"] = matched_by_structure();
    j["exact"] = count(TermStatus::Match);
    j["sign_flipped"] = count(TermStatus::SignFlipped);
    j["mismatch"] = count(TermStatus::Mismatch);
    j["unmatched"] = count(TermStatus::Unmatched);
    j["flagged"] = flagged();
    j["uncovered_segments"] = uncovered_segments;
    auto& arr = j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        arr.push_back({{"term", e.index},
                       {"component", e.component},
                       {"segment", e.segment},
                       {"status", std::string(term_status_name(e.status))},
                       {"max_abs_difference", e.max_abs_difference},
                       {"remarks", e.remarks},
                       {"flagged", e.flagged()}});
    }
    return j.dump(2);
}

}  // namespace knotfield
