#include "mtp/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json17.hpp"

namespace mtp {

std::string format_double_17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                out += pad_in;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
                if (k + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (size_t k = 0; k < j.size(); ++k) {
                out += pad_in;
                dump_rec(j[k], out, indent, depth + 1);
                if (k + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double_17(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json17(const nlohmann::json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

void write_field_csv(std::ostream& os, const Grid& grid, std::span<const double> lattice) {
    if (lattice.size() != static_cast<size_t>(grid.nx()) * grid.ny())
        throw std::invalid_argument("write_field_csv: full-lattice field expected");
    os << "x,y,value\n";
    for (auto [i, j] : grid.active_nodes()) {
        Vec2 p = grid.node(i, j);
        os << format_double_17(p.x) << ',' << format_double_17(p.y) << ','
           << format_double_17(lattice[grid.lattice_index(i, j)]) << '\n';
    }
}

std::vector<double> read_field_csv(std::istream& is, const Grid& grid) {
    std::vector<double> lattice(static_cast<size_t>(grid.nx()) * grid.ny(), 0.0);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_field_csv: empty input");
    size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string sx, sy, sv;
        if (!std::getline(row, sx, ',') || !std::getline(row, sy, ',') || !std::getline(row, sv))
            throw std::runtime_error("read_field_csv: malformed row: " + line);
        double x = std::stod(sx), y = std::stod(sy), v = std::stod(sv);
        int i = static_cast<int>(std::lround((x - grid.origin().x) / grid.h()));
        int j = static_cast<int>(std::lround((y - grid.origin().y) / grid.h()));
        Vec2 p = grid.node(i, j);
        if (std::abs(p.x - x) > grid.h() / 2 || std::abs(p.y - y) > grid.h() / 2 ||
            i < 0 || j < 0 || i >= grid.nx() || j >= grid.ny())
            throw std::runtime_error("read_field_csv: row does not match a lattice node: " + line);
        lattice[grid.lattice_index(i, j)] = v;
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("read_field_csv: no data rows");
    return lattice;
}

}  // namespace mtp
