#include "knotfield/braid.hpp"
#include "knotfield/errors.hpp"
#include "knotfield/field_sampling.hpp"
#include "knotfield/lattice_knot.hpp"
#include "knotfield/topology.hpp"
#include "knotfield/transcription.hpp"
#include "knotfield/verification.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

using namespace knotfield;

namespace {

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kMultiComponent = 2,
    kOnConductor = 3,
    kVerificationFailure = 4,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KnotSource {
    std::string canonical;
    std::string braid;
    std::string file;
    unsigned strands{0};
    double k{1.0};
};

void add_source_options(CLI::App* cmd, KnotSource& src) {
    cmd->add_option("--knot", src.canonical, "Canonical knot")->check(CLI::IsMember({"3_1", "4_1"}));
    cmd->add_option("--braid", src.braid, "Braid word, e.g. \"s1 s2^-1 s1 s2^-1\"");
    cmd->add_option("--strands", src.strands, "Strand count for --braid (default 1 + max generator)");
    cmd->add_option("--knot-file", src.file, "Knot file (one \"x y z\" lattice vertex per line)");
    cmd->add_option("--k", src.k, "Current prefactor k = I/c")->capture_default_str();
}

std::optional<unsigned> strands_of(const KnotSource& src) {
    return src.strands == 0 ? std::nullopt : std::optional<unsigned>(src.strands);
}

LatticeKnot resolve_knot(const KnotSource& src) {
    const int given = !src.canonical.empty() + !src.braid.empty() + !src.file.empty();
    if (given != 1) {
        throw UsageError("exactly one of --knot, --braid, --knot-file is required");
    }
    if (!std::isfinite(src.k)) {
        throw UsageError("--k must be finite");
    }
    LatticeKnot knot;
    if (!src.canonical.empty()) {
        knot = canonical_knot(src.canonical);
    } else if (!src.braid.empty()) {
        knot = close_braid_on_lattice(parse_braid(src.braid, strands_of(src))).knot;
    } else {
        knot = read_knot_file(src.file);
    }
    const ValidationReport report = validate(knot);
    if (!report.ok()) {
        throw InvalidKnotError("knot '" + knot.name() + "' is invalid: " + report.summary());
    }
    return knot.with_prefactor(src.k);
}

// Content is fully assembled before the file is opened, so a failure never
// leaves a partial output behind.
void emit(const std::string& content, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw UsageError("failed writing '" + path + "'");
    }
}

std::string knot_info(const LatticeKnot& knot) {
    const auto segs = segments(knot);
    std::array<int, 3> per_axis{0, 0, 0};
    double length = 0.0;
    for (const auto& s : segs) {
        ++per_axis[axis_index(s.axis())];
        length += s.length();
    }
    const auto box = knot.bounding_box();
    const Vec3 view{0.2113248654, 0.5773502692, 0.7886751346};
    const auto scan = scan_self_crossings(knot_polyline(knot), view);
    std::ostringstream os;
    os << "name: " << knot.name() << '\n';
    os << "vertices: " << knot.size() << '\n';
    os << "segments: " << segs.size() << " (x " << per_axis[0] << ", y " << per_axis[1] << ", z "
       << per_axis[2] << ")\n";
    os << "length: " << format_real(length) << '\n';
    os << "bounding box: " << box[0] << " to " << box[1] << '\n';
    os << "prefactor k: " << format_real(knot.prefactor()) << '\n';
    os << "projection crossings along " << view << ": " << scan.crossings.size() << " (writhe "
       << scan.signed_sum() << ")\n";
    os << "valid: " << (validate(knot).ok() ? "yes" : "no") << '\n';
    return os.str();
}

std::string holonomy_json(const LatticeKnot& knot, const Loop& loop, const HolonomyResult& h) {
    nlohmann::ordered_json j;
    j["knot"] = knot.name();
    j["loop"] = loop.name;
    j["k"] = knot.prefactor();
    j["value"] = h.value;
    j["value_over_4pi_k"] = h.value / (kFourPi * knot.prefactor());
    j["error_estimate"] = h.error_estimate;
    j["edges_evaluated"] = h.edges_evaluated;
    j["field_evaluations"] = h.field_evaluations;
    j["inferred_linking"] = h.inferred_linking;
    j["residual"] = h.residual;
    return j.dump(2) + "\n";
}

std::string holonomy_text(const LatticeKnot& knot, const Loop& loop, const HolonomyResult& h) {
    std::ostringstream os;
    os << "knot: " << knot.name() << '\n';
    os << "loop: " << loop.name << " (" << loop.vertices.size() << " vertices)\n";
    os << "holonomy: " << format_real(h.value) << '\n';
    os << "holonomy / (4 pi k): " << format_real(h.value / (kFourPi * knot.prefactor())) << '\n';
    os << "error estimate: " << format_real(h.error_estimate) << '\n';
    os << "edges evaluated: " << h.edges_evaluated << '\n';
    os << "field evaluations: " << h.field_evaluations << '\n';
    os << "inferred linking: " << h.inferred_linking << '\n';
    os << "residual: " << format_real(h.residual) << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetic fields and holonomies of lattice knots"};
    app.require_subcommand(1);

    KnotSource src;
    double tol = 1e-6;
    double exclusion = kDefaultExclusionRadius;
    std::uint64_t seed = 0;
    std::string out_path;
    bool json = false;

    auto add_common = [&](CLI::App* cmd) {
        add_source_options(cmd, src);
        cmd->add_option("--exclusion", exclusion, "On-conductor exclusion radius")->capture_default_str();
        cmd->add_option("--out", out_path, "Output file (default stdout)");
    };

    // knot info | emit
    auto* knot_cmd = app.add_subcommand("knot", "Inspect or write a lattice knot");
    knot_cmd->require_subcommand(1);
    auto* knot_info_cmd = knot_cmd->add_subcommand("info", "Summarise a knot");
    auto* knot_emit_cmd = knot_cmd->add_subcommand("emit", "Write a knot file");
    add_common(knot_info_cmd);
    add_common(knot_emit_cmd);

    // braid build
    auto* braid_cmd = app.add_subcommand("braid", "Braid closures");
    braid_cmd->require_subcommand(1);
    auto* braid_build = braid_cmd->add_subcommand("build", "Close a braid word on the lattice");
    std::string word;
    unsigned strands = 0;
    braid_build->add_option("--word", word, "Braid word")->required();
    braid_build->add_option("--strands", strands, "Strand count (default 1 + max generator)");
    braid_build->add_option("--out", out_path, "Knot file to write (default stdout)");

    // field sample
    auto* field_cmd = app.add_subcommand("field", "Field evaluation");
    field_cmd->require_subcommand(1);
    auto* sample_cmd = field_cmd->add_subcommand("sample", "Sample B on a regular grid");
    add_common(sample_cmd);
    std::array<double, 3> origin{-2.0, -2.0, -2.0};
    double spacing = 0.5;
    std::array<std::size_t, 3> counts{21, 21, 21};
    std::string format = "csv";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    sample_cmd->add_option("--origin", origin, "Grid origin x y z")->capture_default_str();
    sample_cmd->add_option("--spacing", spacing, "Grid spacing")->capture_default_str();
    sample_cmd->add_option("--counts", counts, "Grid counts nx ny nz")->capture_default_str();
    sample_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl", "vtk"}))
        ->capture_default_str();
    sample_cmd->add_option("--threads", threads, "Worker threads");
    sample_cmd->add_option("--seed", seed, "Accepted for uniformity; sampling is not random");

    // holonomy
    auto* hol_cmd = app.add_subcommand("holonomy", "Line integral of B around a loop");
    add_common(hol_cmd);
    std::string loop_path;
    hol_cmd->add_option("--loop", loop_path, "Loop file (one \"x y z\" real triple per line)")->required();
    hol_cmd->add_option("--tol", tol, "Absolute quadrature tolerance")->capture_default_str();
    hol_cmd->add_flag("--json", json, "JSON output");

    // linking
    auto* link_cmd = app.add_subcommand("linking", "Linking number of a loop with the knot");
    add_common(link_cmd);
    link_cmd->add_option("--loop", loop_path, "Loop file")->required();
    link_cmd->add_option("--tol", tol, "Gauss integral tolerance")->capture_default_str();

    // verify [transcription]
    auto* verify_cmd = app.add_subcommand("verify", "Run the verification suites");
    verify_cmd->require_subcommand(0, 1);
    add_common(verify_cmd);
    VerificationOptions vopt;
    verify_cmd->add_option("--seed", vopt.seed, "Seed for the random suites")->capture_default_str();
    verify_cmd->add_option("--loops", vopt.loops, "Random loops per holonomy suite")->capture_default_str();
    verify_cmd->add_option("--points", vopt.flatness_points, "Random points for curl/divergence")
        ->capture_default_str();
    auto* trans_cmd = verify_cmd->add_subcommand("transcription",
                                                 "Ledger of printed field terms against the engine");
    std::string trans_label;
    std::size_t trans_points = 20;
    trans_cmd->add_option("--knot", trans_label, "Canonical knot")
        ->check(CLI::IsMember({"3_1", "4_1"}))
        ->required();
    trans_cmd->add_option("--points", trans_points, "Sample points per term")->capture_default_str();
    trans_cmd->add_option("--seed", seed, "Seed for the sample points")->capture_default_str();
    trans_cmd->add_option("--out", out_path, "Output file (default stdout)");
    trans_cmd->add_flag("--json", json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (!(exclusion > 0.0)) {
            throw UsageError("--exclusion must be positive");
        }
        if (*knot_info_cmd) {
            emit(knot_info(resolve_knot(src)), out_path);
        } else if (*knot_emit_cmd) {
            emit(format_knot_text(resolve_knot(src)), out_path);
        } else if (*braid_build) {
            const BraidWord bw =
                parse_braid(word, strands == 0 ? std::nullopt : std::optional<unsigned>(strands));
            const BraidEmbedding emb = close_braid_on_lattice(bw);
            const std::string text = format_knot_text(emb.knot, emb.header(bw));
            emit(text, out_path);
            if (!out_path.empty() && out_path != "-") {
                std::cout << "wrote " << emb.knot.name() << " (" << emb.knot.size()
                          << " vertices, crossings " << crossing_count(bw) << ", writhe "
                          << writhe(bw) << ") to " << out_path << '\n';
            }
        } else if (*sample_cmd) {
            GridSpec grid{{origin[0], origin[1], origin[2]}, spacing, counts};
            grid.check();
            const LatticeKnot knot = resolve_knot(src);
            const auto samples = sample_field(knot, grid, exclusion, threads);
            std::ostringstream os;
            write_samples(os, samples, grid, parse_output_format(format),
                          "B field of " + knot.name() + ", k=" + format_real(knot.prefactor()));
            emit(os.str(), out_path);
        } else if (*hol_cmd) {
            const LatticeKnot knot = resolve_knot(src);
            const Loop loop = read_loop_file(loop_path);
            const HolonomyResult h = holonomy(knot, loop, tol, exclusion);
            emit(json ? holonomy_json(knot, loop, h) : holonomy_text(knot, loop, h), out_path);
            return h.residual < tol ? kOk : kVerificationFailure;
        } else if (*link_cmd) {
            const LatticeKnot knot = resolve_knot(src);
            const Loop loop = read_loop_file(loop_path);
            if (const double c = loop_clearance(knot, loop); c < exclusion) {
                throw OnConductorError("loop '" + loop.name + "' touches the knot", 0);
            }
            const LinkingEstimate lk = gauss_linking(knot, loop, tol);
            std::ostringstream os;
            os << "knot: " << knot.name() << '\n';
            os << "loop: " << loop.name << '\n';
            os << "gauss integral / 4pi: " << format_real(lk.raw) << '\n';
            os << "linking number: " << lk.linking << '\n';
            os << "rounding residual: " << format_real(lk.residual) << '\n';
            os << "projection count: " << linking_number_by_projection(knot, loop) << '\n';
            emit(os.str(), out_path);
        } else if (*trans_cmd) {
            const DiscrepancyLedger ledger = discrepancy_ledger(trans_label, trans_points, seed);
            emit(json ? ledger.to_json() + "\n" : ledger.to_text(), out_path);
            const bool covered = ledger.matched_by_structure() == ledger.entries.size() &&
                                 ledger.uncovered_segments.empty();
            return covered ? kOk : kVerificationFailure;
        } else if (*verify_cmd) {
            vopt.exclusion = exclusion;
            const VerificationReport report = run_verification(resolve_knot(src), vopt);
            emit(report.to_json() + "\n", out_path);
            return report.pass() ? kOk : kVerificationFailure;
        }
    } catch (const MultiComponentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMultiComponent;
    } catch (const OnConductorError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOnConductor;
    } catch (const QuadratureError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const PrecisionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const std::exception& e) {
        // Parse errors, invalid knots and grids, unreadable files.
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}
