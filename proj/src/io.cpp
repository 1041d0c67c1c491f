#include "toruslab/io.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "toruslab/common.hpp"

namespace toruslab::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw ConfigError("to_csv: row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("write_text: cannot open " + path.string());
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw ConfigError("write_text: short write to " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("read_text: cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string field_snapshot(const spectral::Field& u) {
    std::string out = "{\"M\":" + std::to_string(u.grid.M) +
                      ",\"theta1\":" + format_double(u.grid.geometry.theta1) +
                      ",\"theta2\":" + format_double(u.grid.geometry.theta2) +
                      ",\"normalization\":\"sum-exp\"}\n";
    out += "m1,m2,re,im\n";
    for (int k1 = 0; k1 < u.grid.M; ++k1)
        for (int k2 = 0; k2 < u.grid.M; ++k2) {
            const Complex c = u.coeffs(k1, k2);
            out += std::to_string(u.grid.mode_of(k1)) + ',' +
                   std::to_string(u.grid.mode_of(k2)) + ',' +
                   format_double(c.real()) + ',' + format_double(c.imag()) +
                   '\n';
        }
    return out;
}

spectral::Field parse_field_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("field snapshot: missing JSON header line");
    const nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("normalization", "") != std::string("sum-exp"))
        throw ConfigError("field snapshot: unknown normalization");

    spectral::TorusGeometry geom(header.at("theta1").get<double>(),
                                 header.at("theta2").get<double>());
    spectral::FourierGrid grid(geom, header.at("M").get<int>());
    spectral::Field u(grid);

    if (!std::getline(in, line) || line != "m1,m2,re,im")
        throw ConfigError("field snapshot: expected header m1,m2,re,im");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(row, cell, ','))
                throw ConfigError("field snapshot: short row");
            vals[c] = std::strtod(cell.c_str(), nullptr);
        }
        u.at_mode(static_cast<int>(vals[0]), static_cast<int>(vals[1])) =
            Complex(vals[2], vals[3]);
    }
    return u;
}

std::string timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace toruslab::io
