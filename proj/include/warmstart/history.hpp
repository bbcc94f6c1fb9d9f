#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>

#include "warmstart/dense.hpp"
#include "warmstart/vector.hpp"

namespace warmstart {

/// Ring buffer of the most recent solution vectors, oldest first.
class HistoryWindow {
 public:
  HistoryWindow(std::size_t capacity, std::size_t dim) : capacity_(capacity), dim_(dim) {
    if (capacity == 0) throw std::invalid_argument("HistoryWindow: capacity must be positive");
  }

  /// Appends x as the newest column. When the window is already full, the
  /// oldest column is removed and handed back so the caller can downdate a
  /// sketch built on top of this window.
  std::optional<Vector> push(Vector x) {
    if (x.size() != dim_) throw std::invalid_argument("HistoryWindow: dimension mismatch");
    std::optional<Vector> evicted;
    if (columns_.size() == capacity_) {
      evicted = std::move(columns_.front());
      columns_.pop_front();
    }
    columns_.push_back(std::move(x));
    return evicted;
  }

  std::size_t size() const { return columns_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t dim() const { return dim_; }
  bool full() const { return columns_.size() == capacity_; }

  const Vector& column(std::size_t j) const { return columns_.at(j); }

  /// Dense copy of the stored columns, oldest first.
  DenseMatrix snapshot() const {
    DenseMatrix x(dim_, columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) x.set_column(j, columns_[j]);
    return x;
  }

 private:
  std::size_t capacity_;
  std::size_t dim_;
  std::deque<Vector> columns_;
};

}  // namespace warmstart
