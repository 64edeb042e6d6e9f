#include "knotfield/braid.hpp"

#include "knotfield/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace knotfield {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

struct ParsedLetter {
    BraidLetter letter;
    std::size_t offset;
};

unsigned parse_index(std::string_view text, std::size_t& pos, std::size_t token_start) {
    const char* first = text.data() + pos;
    const char* last = text.data() + text.size();
    if (first == last || !std::isdigit(static_cast<unsigned char>(*first))) {
        throw ParseError("expected generator index", pos);
    }
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) {
        throw ParseError("generator index out of range", pos);
    }
    if (value == 0) {
        throw ParseError("generator index 0 is not allowed", token_start);
    }
    pos = static_cast<std::size_t>(ptr - text.data());
    return value;
}

}  // namespace

BraidWord parse_braid(std::string_view text, std::optional<unsigned> strands) {
    std::vector<ParsedLetter> parsed;
    std::size_t pos = 0;
    while (true) {
        while (pos < text.size() && is_space(text[pos])) {
            ++pos;
        }
        if (pos >= text.size()) {
            break;
        }
        const std::size_t start = pos;
        BraidLetter letter;
        const char c = text[pos];
        if (c == 's' || c == 'S') {
            ++pos;
            letter.generator = parse_index(text, pos, start);
            if (pos < text.size() && text[pos] == '^') {
                if (text.substr(pos, 3) != "^-1") {
                    throw ParseError("malformed exponent (only ^-1 is allowed)", pos);
                }
                letter.sign = -1;
                pos += 3;
            } else if (pos < text.size() && text[pos] == '\'') {
                letter.sign = -1;
                ++pos;
            }
        } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            if (c == '-' || c == '+') {
                letter.sign = c == '-' ? -1 : 1;
                ++pos;
            }
            letter.generator = parse_index(text, pos, start);
        } else {
            throw ParseError(std::string("unknown token '") + c + "'", pos);
        }
        if (pos < text.size() && !is_space(text[pos])) {
            throw ParseError("unknown token", start);
        }
        parsed.push_back({letter, start});
    }

    BraidWord word;
    unsigned max_gen = 0;
    for (const auto& p : parsed) {
        max_gen = std::max(max_gen, p.letter.generator);
        word.letters.push_back(p.letter);
    }
    word.strands = std::max(2u, max_gen + 1);
    if (strands) {
        if (*strands < 2) {
            throw ParseError("a braid needs at least 2 strands", 0);
        }
        for (const auto& p : parsed) {
            if (p.letter.generator + 1 > *strands) {
                throw ParseError("generator s" + std::to_string(p.letter.generator) +
                                     " needs more than " + std::to_string(*strands) + " strands",
                                 p.offset);
            }
        }
        word.strands = *strands;
    }
    return word;
}

std::string format_braid(const BraidWord& word) {
    std::string out;
    for (const auto& l : word.letters) {
        if (!out.empty()) {
            out += ' ';
        }
        out += 's' + std::to_string(l.generator);
        if (l.sign < 0) {
            out += "^-1";
        }
    }
    return out;
}

std::size_t crossing_count(const BraidWord& word) { return word.letters.size(); }

int writhe(const BraidWord& word) {
    int sum = 0;
    for (const auto& l : word.letters) {
        sum += l.sign;
    }
    return sum;
}

std::vector<unsigned> braid_permutation(const BraidWord& word) {
    // at[q] = strand currently at position q
    std::vector<unsigned> at(word.strands);
    std::iota(at.begin(), at.end(), 0u);
    for (const auto& l : word.letters) {
        std::swap(at[l.generator - 1], at[l.generator]);
    }
    std::vector<unsigned> perm(word.strands);
    for (unsigned q = 0; q < word.strands; ++q) {
        perm[at[q]] = q;
    }
    return perm;
}

std::vector<std::size_t> closure_cycle_structure(const BraidWord& word) {
    const auto perm = braid_permutation(word);
    std::vector<bool> seen(perm.size(), false);
    std::vector<std::size_t> cycles;
    for (unsigned p = 0; p < perm.size(); ++p) {
        if (seen[p]) {
            continue;
        }
        std::size_t len = 0;
        for (unsigned q = p; !seen[q]; q = perm[q]) {
            seen[q] = true;
            ++len;
        }
        cycles.push_back(len);
    }
    std::sort(cycles.rbegin(), cycles.rend());
    return cycles;
}

std::size_t closure_components_union_find(const BraidWord& word) {
    // Nodes: 0..n-1 left ends, n..2n-1 right ends. Strands join a left end to a
    // right end; the closure joins right end q to left end q.
    const unsigned n = word.strands;
    std::vector<unsigned> parent(2 * n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](unsigned x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](unsigned a, unsigned b) { parent[find(a)] = find(b); };

    std::vector<unsigned> at(n);
    std::iota(at.begin(), at.end(), 0u);
    for (const auto& l : word.letters) {
        std::swap(at[l.generator - 1], at[l.generator]);
    }
    for (unsigned q = 0; q < n; ++q) {
        unite(at[q], n + q);
        unite(n + q, q);
    }
    std::size_t roots = 0;
    for (unsigned x = 0; x < 2 * n; ++x) {
        roots += find(x) == x ? 1 : 0;
    }
    return roots;
}

EmbeddingPlan plan_embedding(const BraidWord& word) {
    EmbeddingPlan plan;
    const auto n = static_cast<std::int64_t>(word.strands);
    for (std::size_t m = 0; m < word.letters.size(); ++m) {
        const auto& l = word.letters[m];
        CrossingPlacement c;
        c.letter = m;
        c.x_begin = static_cast<std::int64_t>(m) * kLetterWidth;
        c.x_end = c.x_begin + kLetterWidth;
        c.generator = l;
        // Positive letters send the lower position to the back face.
        c.migrating_position = l.sign > 0 ? l.generator : l.generator + 1;
        c.z_low = 2 * static_cast<std::int64_t>(l.generator);
        c.z_mid = c.z_low + 1;
        c.z_high = c.z_low + 2;
        plan.placements.push_back(c);
    }
    const std::int64_t x_end = static_cast<std::int64_t>(word.letters.size()) * kLetterWidth;
    for (std::int64_t p = 1; p <= n; ++p) {
        // Nested arcs: position n hugs the braid, position 1 is outermost.
        const std::int64_t reach = 2 * (n - p + 1);
        plan.closures.push_back({static_cast<unsigned>(p), x_end + reach, -reach, 2 * n + reach});
    }
    plan.box_min = {-2 * n, kFrontFaceY, 2};
    plan.box_max = {x_end + 2 * n, kBackFaceY, 4 * n};
    return plan;
}

namespace {

// Appends the path of the strand entering a crossing at position p; returns its
// exit position.
unsigned trace_crossing(const CrossingPlacement& c, unsigned p, std::vector<LatticePoint>& out) {
    const std::int64_t x0 = c.x_begin;
    const bool lower = p == c.generator.generator;
    const bool back = p == c.migrating_position;
    const std::int64_t yb = back ? kBackFaceY : kFrontFaceY;
    if (lower) {
        // Climbs through the mid plateau: up at x0+1, across, up at x0+3.
        out.push_back({x0 + 1, kFrontFaceY, c.z_low});
        out.push_back({x0 + 1, yb, c.z_low});
        out.push_back({x0 + 1, yb, c.z_mid});
        out.push_back({x0 + 3, yb, c.z_mid});
        out.push_back({x0 + 3, yb, c.z_high});
        out.push_back({x0 + 3, kFrontFaceY, c.z_high});
        out.push_back({x0 + 4, kFrontFaceY, c.z_high});
        return p + 1;
    }
    // Descends at x0+2, crossing the plateau.
    out.push_back({x0 + 1, kFrontFaceY, c.z_high});
    out.push_back({x0 + 1, yb, c.z_high});
    out.push_back({x0 + 2, yb, c.z_high});
    out.push_back({x0 + 2, yb, c.z_low});
    out.push_back({x0 + 3, yb, c.z_low});
    out.push_back({x0 + 3, kFrontFaceY, c.z_low});
    out.push_back({x0 + 4, kFrontFaceY, c.z_low});
    return p - 1;
}

std::string join_cycles(const std::vector<std::size_t>& cycles) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        os << (i ? "," : "") << cycles[i];
    }
    return os.str();
}

}  // namespace

BraidEmbedding close_braid_on_lattice(const BraidWord& word) {
    for (const auto& l : word.letters) {
        if (l.generator < 1 || l.generator + 1 > word.strands) {
            throw std::invalid_argument("generator s" + std::to_string(l.generator) +
                                        " outside braid on " + std::to_string(word.strands) +
                                        " strands");
        }
    }
    const auto cycles = closure_cycle_structure(word);
    if (cycles.size() != 1) {
        throw MultiComponentError("closure of '" + format_braid(word) + "' on " +
                                  std::to_string(word.strands) + " strands is a " +
                                  std::to_string(cycles.size()) +
                                  "-component link (cycle lengths " + join_cycles(cycles) + ")");
    }

    BraidEmbedding result;
    result.plan = plan_embedding(word);
    const auto& plan = result.plan;

    std::vector<LatticePoint> path;
    unsigned p = 1;
    path.push_back({0, kFrontFaceY, 2});
    for (unsigned pass = 0; pass < word.strands; ++pass) {
        for (const auto& c : plan.placements) {
            const unsigned g = c.generator.generator;
            if (p == g || p == g + 1) {
                p = trace_crossing(c, p, path);
            }
        }
        const auto& arc = plan.closures[p - 1];
        const std::int64_t z = 2 * static_cast<std::int64_t>(p);
        path.push_back({arc.x_right, kFrontFaceY, z});
        path.push_back({arc.x_right, kFrontFaceY, arc.z_top});
        path.push_back({arc.x_left, kFrontFaceY, arc.z_top});
        path.push_back({arc.x_left, kFrontFaceY, z});
        path.push_back({0, kFrontFaceY, z});
    }
    if (p != 1 || path.back() != path.front()) {
        throw std::logic_error("braid trace did not close");
    }
    path.pop_back();

    result.knot = LatticeKnot(simplify_corners(std::move(path)), "braid(" + format_braid(word) + ")");
    const ValidationReport report = validate(result.knot);
    if (!report.ok()) {
        throw std::logic_error("braid layout produced an invalid knot: " + report.summary());
    }
    return result;
}

std::vector<std::string> BraidEmbedding::header(const BraidWord& word) const {
    std::vector<std::string> lines;
    lines.push_back("braid word: " + format_braid(word) + " on " + std::to_string(word.strands) +
                    " strands");
    lines.push_back("crossings " + std::to_string(crossing_count(word)) + ", writhe " +
                    std::to_string(writhe(word)));
    std::ostringstream box;
    box << "bounding box " << plan.box_min << " to " << plan.box_max << ", faces y="
        << kFrontFaceY << " and y=" << kBackFaceY << ", letter width " << kLetterWidth;
    lines.push_back(box.str());
    std::ostringstream levels;
    levels << "closure z-levels:";
    for (const auto& arc : plan.closures) {
        levels << " p" << arc.position << '=' << arc.z_top;
    }
    lines.push_back(levels.str());
    return lines;
}

}  // namespace knotfield
