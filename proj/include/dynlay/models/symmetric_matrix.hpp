#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace dynlay::models {

/// Growable symmetric matrix stored as a lower-triangular array of rows.
/// Adding an index appends one row; removing swaps the last index into the
/// hole so every operation is linear in the current size.
template <class T>
class SymmetricMatrix {
public:
    std::size_t size() const { return rows_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return i >= j ? rows_[i][j] : rows_[j][i]; }
    const T& operator()(std::size_t i, std::size_t j) const
    {
        return i >= j ? rows_[i][j] : rows_[j][i];
    }

    /// Appends index size() with every entry (including the diagonal) = fill.
    void grow(const T& fill) { rows_.emplace_back(rows_.size() + 1, fill); }

    /// Removes index r; the former last index now lives at r.
    void swap_remove(std::size_t r)
    {
        const std::size_t last = rows_.size() - 1;
        if (r != last) {
            for (std::size_t j = 0; j < last; ++j) {
                if (j != r)
                    (*this)(r, j) = (*this)(last, j);
            }
            (*this)(r, r) = (*this)(last, last);
        }
        rows_.pop_back();
    }

    void clear() { rows_.clear(); }

private:
    std::vector<std::vector<T>> rows_;
};

}  // namespace dynlay::models
