/*
 * Copyright 2026 The ABC Bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Number and CSV formatting shared by every report writer.

#ifndef ABC_BENCH_FORMAT_H_
#define ABC_BENCH_FORMAT_H_

#include <span>
#include <string>
#include <vector>

namespace abc_bench {

// 17 significant digits, '.' decimal separator regardless of locale.
std::string FormatDouble(double value);

// Comma-joined FormatDouble values.
std::string FormatDoubles(std::span<const double> values);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string CsvField(const std::string& field);

// 1-indexed feature numbers joined by separator, e.g. "2 1 3".
std::string FormatOrderOneBased(std::span<const int> order,
                                const std::string& separator = " ");

}  // namespace abc_bench

#endif  // ABC_BENCH_FORMAT_H_
