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
#include "litscreen/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "litscreen/error.hpp"

namespace litscreen {

double FeatureMatrix::RowView::get(std::uint32_t column) const {
  auto it = std::lower_bound(columns.begin(), columns.end(), column);
  if (it == columns.end() || *it != column) return 0.0;
  return values[static_cast<std::size_t>(it - columns.begin())];
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> column_names) : names_(std::move(column_names)) {
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) throw Error("duplicate feature column " + names_[i]);
  }
}

void FeatureMatrix::add_row(std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first >= names_.size()) throw Error("feature column index out of range");
    if (i && entries[i].first == entries[i - 1].first) {
      throw Error("feature column " + names_[entries[i].first] + " set twice in one row");
    }
  }
  for (const auto& [c, v] : entries) {
    if (v == 0.0) continue;
    columns_.push_back(c);
    values_.push_back(v);
  }
  row_ptr_.push_back(values_.size());
}

void FeatureMatrix::add_dense_row(std::span<const double> values) {
  if (values.size() != names_.size()) throw Error("dense row width does not match column count");
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c] == 0.0) continue;
    columns_.push_back(static_cast<std::uint32_t>(c));
    values_.push_back(values[c]);
  }
  row_ptr_.push_back(values_.size());
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureMatrix::RowView FeatureMatrix::row(std::size_t r) const {
  const std::size_t begin = row_ptr_[r];
  const std::size_t end = row_ptr_[r + 1];
  return RowView{std::span<const std::uint32_t>(columns_.data() + begin, end - begin),
                 std::span<const double>(values_.data() + begin, end - begin)};
}

FeatureMatrix FeatureMatrix::aligned_to(const std::vector<std::string>& names) const {
  if (names == names_) return *this;
  std::vector<std::string> missing;
  std::vector<std::uint32_t> remap(names_.size(), 0);
  std::vector<bool> used(names_.size(), false);
  std::unordered_map<std::string, std::size_t> target;
  for (std::size_t i = 0; i < names.size(); ++i) {
    target.emplace(names[i], i);
    auto it = index_.find(names[i]);
    if (it == index_.end()) {
      missing.push_back(names[i]);
    } else {
      remap[it->second] = static_cast<std::uint32_t>(i);
      used[it->second] = true;
    }
  }
  std::vector<std::string> extra;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (!used[c]) extra.push_back(names_[c]);
  }
  if (!missing.empty() || !extra.empty()) {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      const std::size_t shown = std::min<std::size_t>(v.size(), 10);
      for (std::size_t i = 0; i < shown; ++i) s += (i ? ", " : "") + v[i];
      if (v.size() > shown) s += ", ... (" + std::to_string(v.size()) + " total)";
      return s;
    };
    std::string message = "feature schema mismatch:";
    if (!missing.empty()) message += " missing [" + join(missing) + "]";
    if (!extra.empty()) message += " extra [" + join(extra) + "]";
    throw SchemaError(message);
  }
  FeatureMatrix out(names);
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t r = 0; r < rows(); ++r) {
    auto view = row(r);
    entries.clear();
    for (std::size_t k = 0; k < view.columns.size(); ++k) entries.emplace_back(remap[view.columns[k]], view.values[k]);
    out.add_row(entries);
  }
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> selected) const {
  FeatureMatrix out;
  out.names_ = names_;
  out.index_ = index_;
  for (std::size_t r : selected) {
    auto view = row(r);
    out.columns_.insert(out.columns_.end(), view.columns.begin(), view.columns.end());
    out.values_.insert(out.values_.end(), view.values.begin(), view.values.end());
    out.row_ptr_.push_back(out.values_.size());
  }
  return out;
}

std::optional<std::size_t> FeatureMatrix::first_non_finite_row() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    for (double v : row(r).values) {
      if (!std::isfinite(v)) return r;
    }
  }
  return std::nullopt;
}

}  // namespace litscreen
