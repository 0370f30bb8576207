// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace litscreen {

// Row-major sparse matrix with named columns. Dense match features and
// sparse TFIDF blocks share this representation; unstored cells are 0.
// Learners address columns by name, never by position.
class FeatureMatrix {
 public:
  struct RowView {
    std::span<const std::uint32_t> columns;  // ascending
    std::span<const double> values;

    double get(std::uint32_t column) const;
  };

  FeatureMatrix() = default;
  // Throws Error on duplicate column names.
  explicit FeatureMatrix(std::vector<std::string> column_names);

  // Entries may be unsorted; explicit zeros are dropped. Throws Error on an
  // out-of-range or repeated column.
  void add_row(std::vector<std::pair<std::uint32_t, double>> entries);
  void add_dense_row(std::span<const double> values);

  std::size_t rows() const noexcept { return row_ptr_.size() - 1; }
  std::size_t cols() const noexcept { return names_.size(); }
  std::size_t nonzeros() const noexcept { return values_.size(); }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  std::optional<std::size_t> column_index(std::string_view name) const;

  RowView row(std::size_t r) const;
  double at(std::size_t r, std::size_t c) const { return row(r).get(static_cast<std::uint32_t>(c)); }

  // Same rows with columns permuted into `names` order. Throws SchemaError
  // naming every missing and extra column when the name sets differ.
  FeatureMatrix aligned_to(const std::vector<std::string>& names) const;

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  // Index of the first row holding a NaN or infinity, if any.
  std::optional<std::size_t> first_non_finite_row() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> columns_;
  std::vector<double> values_;
};

}  // namespace litscreen
