#pragma once

#include "cdft/grid.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace cdft {

/// Malformed field file, sidecar, or a grid that does not match the data.
class FieldFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sidecar path for a field CSV: same stem, `.json` extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// CSV columns `x,y,value` (scalar) or `x,y,vx,vy` (vector), rows ordered by y
// then x, 17 significant digits; sidecar JSON {"n", "L", "kind"}.
std::string scalar_field_csv(const ScalarField& f);
std::string vector_field_csv(const VectorField& v);

void write_scalar_field(const std::filesystem::path& csv, const ScalarField& f);
void write_vector_field(const std::filesystem::path& csv, const VectorField& v);
ScalarField read_scalar_field(const std::filesystem::path& csv);
VectorField read_vector_field(const std::filesystem::path& csv);

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// printf("%.17g").
std::string format_g17(double v);

} // namespace cdft
