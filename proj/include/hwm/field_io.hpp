#pragma once

#include <string>
#include <vector>

#include "hwm/field.hpp"

namespace hwm {

/**
 * Binary field dump.  Little-endian layout:
 *   bytes 0..3   magic "HWMF"
 *   u32          format version (currently 1)
 *   u32          dimension d
 *   u32 * d      grid sizes N_j
 *   f64 * d      box lengths L_j
 *   u32          component count
 *   f64 * (count * prod N_j)  row-major samples, one component after another
 */
void dump_fields(const std::string& path, const std::vector<const ScalarField*>& components);
void dump_field(const std::string& path, const ScalarField& f);
void dump_field(const std::string& path, const VectorField3& v);

struct LoadedFields {
    TorusGrid grid;
    std::vector<ScalarField> components;
};

LoadedFields load_fields(const std::string& path);

} // namespace hwm
