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

#ifndef QMEM_JSON_IO_HPP
#define QMEM_JSON_IO_HPP

#include "json.hpp"
#include "qmem/matrix.hpp"

namespace qmem::json_io {

// Matrices travel as an array of rows, each entry a [re, im] pair.

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qmem::json_io

#endif  // QMEM_JSON_IO_HPP
