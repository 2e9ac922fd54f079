#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace deliverai {

/// Dense row-major square matrix.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < n_ && c < n_);
        return data_[r * n_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < n_ && c < n_);
        return data_[r * n_ + c];
    }

    std::span<double> row(std::size_t r) { return {data_.data() + r * n_, n_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

    std::span<const double> values() const { return data_; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

}  // namespace deliverai
