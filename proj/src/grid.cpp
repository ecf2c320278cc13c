#include "hwm/grid.hpp"

#include <cmath>
#include <sstream>

#include "hwm/errors.hpp"

namespace hwm {

TorusGrid::TorusGrid(const int* sizes, const double* lengths, int dim) : dim_(dim) {
    if (dim < 1 || dim > max_dim)
        throw UnsupportedDimensionError("grid dimension must be in 1.." +
                                        std::to_string(max_dim) + ", got " +
                                        std::to_string(dim));
    total_points_ = 1;
    cell_volume_ = 1.0;
    for (int j = 0; j < dim; ++j) {
        sizes_[j] = sizes[j];
        lengths_[j] = lengths[j];
        total_points_ *= static_cast<std::size_t>(sizes[j]);
        cell_volume_ *= lengths[j] / sizes[j];
    }
    validate();
    total_modes_ = 1;
    for (int j = 0; j + 1 < dim; ++j) total_modes_ *= static_cast<std::size_t>(sizes_[j]);
    total_modes_ *= static_cast<std::size_t>(sizes_[dim - 1] / 2 + 1);
}

TorusGrid::TorusGrid(std::initializer_list<int> sizes, std::initializer_list<double> lengths)
    : TorusGrid(sizes.begin(), lengths.begin(), static_cast<int>(sizes.size())) {
    if (sizes.size() != lengths.size())
        throw ParameterOutOfRangeError("grid sizes/lengths dimension mismatch");
}

TorusGrid TorusGrid::cubic(int dim, int n, double length) {
    int sizes[max_dim];
    double lengths[max_dim];
    for (int j = 0; j < max_dim; ++j) {
        sizes[j] = n;
        lengths[j] = length;
    }
    return TorusGrid(sizes, lengths, dim);
}

void TorusGrid::validate() const {
    for (int j = 0; j < dim_; ++j) {
        if (sizes_[j] < 8 || sizes_[j] % 2 != 0)
            throw ParameterOutOfRangeError("grid size along axis " + std::to_string(j) +
                                           " must be even and >= 8, got " +
                                           std::to_string(sizes_[j]));
        if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j]))
            throw ParameterOutOfRangeError("grid length along axis " + std::to_string(j) +
                                           " must be positive and finite");
    }
}

double TorusGrid::wavenumber(int axis, int mode) const {
    return two_pi * mode / lengths_[axis];
}

void TorusGrid::unravel(std::size_t flat, int* idx) const {
    for (int j = dim_ - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(flat % static_cast<std::size_t>(sizes_[j]));
        flat /= static_cast<std::size_t>(sizes_[j]);
    }
}

std::size_t TorusGrid::ravel(const int* idx) const {
    std::size_t flat = 0;
    for (int j = 0; j < dim_; ++j)
        flat = flat * static_cast<std::size_t>(sizes_[j]) + static_cast<std::size_t>(idx[j]);
    return flat;
}

bool TorusGrid::operator==(const TorusGrid& other) const {
    if (dim_ != other.dim_) return false;
    for (int j = 0; j < dim_; ++j)
        if (sizes_[j] != other.sizes_[j] || lengths_[j] != other.lengths_[j]) return false;
    return true;
}

std::string TorusGrid::describe() const {
    std::ostringstream os;
    os << "T^" << dim_ << " ";
    for (int j = 0; j < dim_; ++j) os << (j ? "x" : "") << sizes_[j];
    os << " L=";
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << lengths_[j];
    return os.str();
}

} // namespace hwm
