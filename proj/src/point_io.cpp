#include "sphdesign/point_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>
#include <vector>

namespace sphdesign {

ParseError::ParseError(std::size_t line_, const std::string& what)
    : std::runtime_error(line_ ? "line " + std::to_string(line_) + ": " + what : what), line(line_) {}

namespace {

std::vector<double> parse_row(const std::string& text, std::size_t line_no) {
    std::vector<double> row;
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
        if (p == end) break;
        double v = 0.0;
        // from_chars rejects a leading '+', which some writers emit.
        const char* start = (*p == '+') ? p + 1 : p;
        const auto [next, ec] = std::from_chars(start, end, v);
        if (ec != std::errc() || next == start) {
            throw ParseError(line_no, "cannot parse number near '" +
                                          std::string(p, std::min<std::size_t>(16, static_cast<std::size_t>(end - p))) + "'");
        }
        if (!std::isfinite(v)) throw ParseError(line_no, "non-finite coordinate");
        row.push_back(v);
        p = next;
    }
    return row;
}

}  // namespace

PointSet read_points(std::istream& in) {
    static const std::regex header(R"(^#\s*sphdesign\s+d\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*$)");
    std::optional<int> d;
    std::optional<std::size_t> n_declared;
    std::vector<double> coords;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::smatch m;
            const std::string body = line.substr(first);
            if (std::regex_match(body, m, header)) {
                if (rows > 0) throw ParseError(line_no, "header must precede data rows");
                d = std::stoi(m[1].str());
                n_declared = std::stoul(m[2].str());
                if (*d < 1) throw ParseError(line_no, "header declares d < 1");
            }
            continue;
        }
        const auto row = parse_row(line, line_no);
        if (!d) {
            if (row.size() < 2) throw ParseError(line_no, "need at least 2 coordinates per point");
            d = static_cast<int>(row.size()) - 1;
        }
        if (row.size() != static_cast<std::size_t>(*d + 1)) {
            throw ParseError(line_no, "expected " + std::to_string(*d + 1) + " coordinates, found " +
                                          std::to_string(row.size()));
        }
        double sq = 0.0;
        for (double v : row) sq += v * v;
        if (std::abs(std::sqrt(sq) - 1.0) > PointSet::kNormalizeTolerance) {
            throw ParseError(line_no, "point norm " + std::to_string(std::sqrt(sq)) +
                                          " is not within 1e-8 of 1");
        }
        coords.insert(coords.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw ParseError(line_no, "no points found");
    if (n_declared && *n_declared != rows) {
        throw ParseError(0, "header declares n=" + std::to_string(*n_declared) + " but file has " +
                                std::to_string(rows) + " points");
    }
    return PointSet(SphereDim(*d), std::move(coords));
}

PointSet read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return read_points(in);
}

void write_points(std::ostream& out, const PointSet& x) {
    out << "# sphdesign d=" << x.dim().value() << " n=" << x.size() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = x.point(i);
        for (std::size_t c = 0; c < p.size(); ++c) {
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p[c], std::chars_format::general, 17);
            (void)ec;
            if (c) out << ' ';
            out.write(buf, end - buf);
        }
        out << '\n';
    }
}

void write_points_file(const std::string& path, const PointSet& x) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_points(out, x);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace sphdesign
