#include "cdft/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace cdft {

namespace {

using nlohmann::json;

std::string sidecar_json(const Grid2D& g, const char* kind) {
    json meta;
    meta["n"] = g.n();
    meta["L"] = g.half_extent();
    meta["kind"] = kind;
    return meta.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FieldFormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Grid2D read_sidecar(const std::filesystem::path& csv, const std::string& expected_kind) {
    const auto side = sidecar_path(csv);
    json meta;
    try {
        meta = json::parse(read_text(side));
    } catch (const json::parse_error& e) {
        throw FieldFormatError(side.string() + ": " + e.what());
    }
    if (!meta.is_object() || !meta.contains("n") || !meta.contains("L") ||
        !meta.contains("kind")) {
        throw FieldFormatError(side.string() + ": sidecar needs keys n, L, kind");
    }
    if (!meta["n"].is_number_unsigned() || !meta["L"].is_number() || !meta["kind"].is_string()) {
        throw FieldFormatError(side.string() + ": wrong value types in sidecar");
    }
    if (meta["kind"].get<std::string>() != expected_kind) {
        throw FieldFormatError(side.string() + ": expected kind '" + expected_kind + "', got '" +
                               meta["kind"].get<std::string>() + "'");
    }
    try {
        return Grid2D(meta["n"].get<std::size_t>(), meta["L"].get<double>());
    } catch (const std::invalid_argument& e) {
        throw FieldFormatError(side.string() + ": " + e.what());
    }
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& csv, const Grid2D& g,
                                           const std::string& header, std::size_t columns) {
    std::istringstream in(read_text(csv));
    std::string line;
    if (!std::getline(in, line)) throw FieldFormatError(csv.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
        throw FieldFormatError(csv.string() + ": expected header '" + header + "'");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(g.size());
    std::size_t lineno = 1;
    const double coord_tol = 1e-12 * g.half_extent();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || !std::isfinite(v)) {
                throw FieldFormatError(csv.string() + ":" + std::to_string(lineno) +
                                       ": bad number '" + cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != columns) {
            throw FieldFormatError(csv.string() + ":" + std::to_string(lineno) + ": expected " +
                                   std::to_string(columns) + " columns");
        }
        const std::size_t k = rows.size();
        if (k >= g.size()) throw FieldFormatError(csv.string() + ": too many rows");
        const std::size_t ix = k % g.n();
        const std::size_t iy = k / g.n();
        if (std::abs(row[0] - g.coord(ix)) > coord_tol ||
            std::abs(row[1] - g.coord(iy)) > coord_tol) {
            throw FieldFormatError(csv.string() + ":" + std::to_string(lineno) +
                                   ": node coordinates do not match the sidecar grid");
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() != g.size()) {
        throw FieldFormatError(csv.string() + ": expected " + std::to_string(g.size()) +
                               " rows, got " + std::to_string(rows.size()));
    }
    return rows;
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

std::string scalar_field_csv(const ScalarField& f) {
    const Grid2D& g = f.grid();
    std::string out = "x,y,value\n";
    out.reserve(g.size() * 64);
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            out += format_g17(g.coord(ix)) + ',' + format_g17(g.coord(iy)) + ',' +
                   format_g17(f.at(ix, iy)) + '\n';
        }
    }
    return out;
}

std::string vector_field_csv(const VectorField& v) {
    const Grid2D& g = v.grid();
    std::string out = "x,y,vx,vy\n";
    out.reserve(g.size() * 96);
    for (std::size_t iy = 0; iy < g.n(); ++iy) {
        for (std::size_t ix = 0; ix < g.n(); ++ix) {
            const std::size_t i = g.index(ix, iy);
            out += format_g17(g.coord(ix)) + ',' + format_g17(g.coord(iy)) + ',' +
                   format_g17(v.x()[i]) + ',' + format_g17(v.y()[i]) + '\n';
        }
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_scalar_field(const std::filesystem::path& csv, const ScalarField& f) {
    write_file_atomic(csv, scalar_field_csv(f));
    write_file_atomic(sidecar_path(csv), sidecar_json(f.grid(), "scalar"));
}

void write_vector_field(const std::filesystem::path& csv, const VectorField& v) {
    write_file_atomic(csv, vector_field_csv(v));
    write_file_atomic(sidecar_path(csv), sidecar_json(v.grid(), "vector"));
}

ScalarField read_scalar_field(const std::filesystem::path& csv) {
    const Grid2D g = read_sidecar(csv, "scalar");
    const auto rows = read_rows(csv, g, "x,y,value", 3);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][2];
    return ScalarField(g, std::move(v));
}

VectorField read_vector_field(const std::filesystem::path& csv) {
    const Grid2D g = read_sidecar(csv, "vector");
    const auto rows = read_rows(csv, g, "x,y,vx,vy", 4);
    std::vector<double> vx(g.size());
    std::vector<double> vy(g.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        vx[i] = rows[i][2];
        vy[i] = rows[i][3];
    }
    return VectorField(g, std::move(vx), std::move(vy));
}

} // namespace cdft
