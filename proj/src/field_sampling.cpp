#include "knotfield/field_sampling.hpp"

#include "knotfield/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace knotfield {

void GridSpec::check() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("grid spacing must be positive");
    }
    for (auto c : counts) {
        if (c == 0) {
            throw std::invalid_argument("grid counts must be positive");
        }
    }
    if (!is_finite(origin)) {
        throw std::invalid_argument("grid origin must be finite");
    }
}

Vec3 GridSpec::point(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin.x + spacing * static_cast<double>(i), origin.y + spacing * static_cast<double>(j),
            origin.z + spacing * static_cast<double>(k)};
}

OutputFormat parse_output_format(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "jsonl") {
        return OutputFormat::Jsonl;
    }
    if (name == "vtk") {
        return OutputFormat::Vtk;
    }
    throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

std::vector<FieldSample> sample_field(const LatticeKnot& knot, const GridSpec& grid,
                                      double exclusion, unsigned threads) {
    grid.check();
    const KnotField field(knot, exclusion);
    const std::size_t n = grid.total();
    const std::size_t ny = grid.counts[1];
    const std::size_t nz = grid.counts[2];
    std::vector<FieldSample> out(n);

    auto work = [&](std::size_t begin, std::size_t end) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t k = idx % nz;
            const std::size_t j = (idx / nz) % ny;
            const std::size_t i = idx / (nz * ny);
            FieldSample& s = out[idx];
            s.point = grid.point(i, j, k);
            if (field.clearance(s.point) < exclusion) {
                s.on_conductor = true;
                s.field = {nan, nan, nan};
            } else {
                s.field = field.at(s.point);
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

std::string format_real(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const std::vector<FieldSample>& samples) {
    os << "x,y,z,Bx,By,Bz,on_conductor\n";
    for (const auto& s : samples) {
        os << format_real(s.point.x) << ',' << format_real(s.point.y) << ','
           << format_real(s.point.z) << ',' << format_real(s.field.x) << ','
           << format_real(s.field.y) << ',' << format_real(s.field.z) << ','
           << (s.on_conductor ? 1 : 0) << '\n';
    }
}

void write_jsonl(std::ostream& os, const std::vector<FieldSample>& samples) {
    // JSON has no NaN; masked components are null.
    auto value = [](double v) { return std::isnan(v) ? std::string("null") : format_real(v); };
    for (const auto& s : samples) {
        os << "{\"x\":" << format_real(s.point.x) << ",\"y\":" << format_real(s.point.y)
           << ",\"z\":" << format_real(s.point.z) << ",\"Bx\":" << value(s.field.x)
           << ",\"By\":" << value(s.field.y) << ",\"Bz\":" << value(s.field.z)
           << ",\"on_conductor\":" << (s.on_conductor ? "true" : "false") << "}\n";
    }
}

void write_vtk(std::ostream& os, const std::vector<FieldSample>& samples, const GridSpec& grid,
               const std::string& title) {
    const auto [nx, ny, nz] = grid.counts;
    os << "# vtk DataFile Version 3.0\n";
    os << title.substr(0, 255) << '\n';
    os << "ASCII\n";
    os << "DATASET STRUCTURED_POINTS\n";
    os << "DIMENSIONS " << nx << ' ' << ny << ' ' << nz << '\n';
    os << "ORIGIN " << format_real(grid.origin.x) << ' ' << format_real(grid.origin.y) << ' '
       << format_real(grid.origin.z) << '\n';
    os << "SPACING " << format_real(grid.spacing) << ' ' << format_real(grid.spacing) << ' '
       << format_real(grid.spacing) << '\n';
    os << "POINT_DATA " << grid.total() << '\n';
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> const FieldSample& {
        return samples[(i * ny + j) * nz + k];
    };
    os << "VECTORS B double\n";
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const auto& s = at(i, j, k);
                os << format_real(s.field.x) << ' ' << format_real(s.field.y) << ' '
                   << format_real(s.field.z) << '\n';
            }
        }
    }
    os << "SCALARS on_conductor int 1\n";
    os << "LOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                os << (at(i, j, k).on_conductor ? 1 : 0) << '\n';
            }
        }
    }
}

void write_samples(std::ostream& os, const std::vector<FieldSample>& samples,
                   const GridSpec& grid, OutputFormat format, const std::string& title) {
    switch (format) {
        case OutputFormat::Csv: write_csv(os, samples); break;
        case OutputFormat::Jsonl: write_jsonl(os, samples); break;
        case OutputFormat::Vtk: write_vtk(os, samples, grid, title); break;
    }
}

}  // namespace knotfield
