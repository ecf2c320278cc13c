#include "hwm/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "hwm/errors.hpp"

// The format is declared little-endian; this implementation writes native
// doubles and is intended for little-endian hosts (checked at load/dump).

namespace hwm {

namespace {

constexpr char kMagic[4] = {'H', 'W', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

bool host_is_little_endian() {
    const std::uint32_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    return b == 1;
}

void require_le() {
    if (!host_is_little_endian()) throw Error("field dump requires a little-endian host");
}

template <class T>
void write_pod(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("field dump truncated");
    return v;
}

} // namespace

void dump_fields(const std::string& path, const std::vector<const ScalarField*>& components) {
    require_le();
    if (components.empty()) throw ParameterOutOfRangeError("field dump needs >= 1 component");
    const TorusGrid& g = components.front()->grid();
    for (const ScalarField* f : components)
        if (f->grid() != g) throw ParameterOutOfRangeError("field dump components differ in grid");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path + " for writing");
    os.write(kMagic, 4);
    write_pod(os, kVersion);
    write_pod(os, static_cast<std::uint32_t>(g.dim()));
    for (int j = 0; j < g.dim(); ++j) write_pod(os, static_cast<std::uint32_t>(g.size(j)));
    for (int j = 0; j < g.dim(); ++j) write_pod(os, g.length(j));
    write_pod(os, static_cast<std::uint32_t>(components.size()));
    for (const ScalarField* f : components)
        os.write(reinterpret_cast<const char*>(f->data()),
                 static_cast<std::streamsize>(f->size() * sizeof(double)));
    if (!os) throw Error("write failed for " + path);
}

void dump_field(const std::string& path, const ScalarField& f) { dump_fields(path, {&f}); }

void dump_field(const std::string& path, const VectorField3& v) {
    dump_fields(path, {&v.component(0), &v.component(1), &v.component(2)});
}

LoadedFields load_fields(const std::string& path) {
    require_le();
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(path + " is not a field dump (bad magic)");
    const auto version = read_pod<std::uint32_t>(is);
    if (version != kVersion)
        throw Error(path + ": unsupported format version " + std::to_string(version));
    const auto dim = read_pod<std::uint32_t>(is);
    if (dim < 1 || dim > TorusGrid::max_dim)
        throw Error(path + ": bad dimension " + std::to_string(dim));
    int sizes[TorusGrid::max_dim];
    double lengths[TorusGrid::max_dim];
    for (std::uint32_t j = 0; j < dim; ++j)
        sizes[j] = static_cast<int>(read_pod<std::uint32_t>(is));
    for (std::uint32_t j = 0; j < dim; ++j) lengths[j] = read_pod<double>(is);
    TorusGrid grid(sizes, lengths, static_cast<int>(dim));
    const auto count = read_pod<std::uint32_t>(is);
    if (count == 0 || count > 1024) throw Error(path + ": implausible component count");

    LoadedFields out{grid, {}};
    out.components.reserve(count);
    for (std::uint32_t c = 0; c < count; ++c) {
        std::vector<double> values(grid.total_points());
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(double)));
        if (!is) throw Error(path + " truncated in component " + std::to_string(c));
        ScalarField f(grid, std::move(values));
        if (!f.all_finite()) throw Error(path + ": non-finite samples in component " +
                                         std::to_string(c));
        out.components.push_back(std::move(f));
    }
    return out;
}

} // namespace hwm
