// Copyright 2026 The qmemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmem/json_io.hpp"

#include <stdexcept>

namespace qmem::json_io {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix JSON: expected nonempty row array");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || row.size() != cols)
      throw std::invalid_argument("matrix JSON: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix JSON: entry must be [re, im]");
      m(r, c) = complex_t{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return m;
}

}  // namespace qmem::json_io
