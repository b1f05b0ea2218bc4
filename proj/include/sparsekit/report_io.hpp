// Copyright 2026 The sparsekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV renderings of plans, reports, stats, curves and fine-tune
// tables. Doubles are printed in shortest round-trip form.

#include <cstddef>
#include <string>
#include <string_view>

#include "sparsekit/model.hpp"
#include "sparsekit/sparsifier.hpp"
#include "sparsekit/stats.hpp"
#include "sparsekit/sweep.hpp"

namespace sparsekit {

/// {"method", "params", "layers", "thresholds"}; the sentinel -1 is kept as is.
std::string plan_to_json(const SparsifyPlan& plan, const Model& model);
/// Inverse of plan_to_json. Layer names are not checked here.
SparsifyPlan plan_from_json(std::string_view text);

std::string report_to_json(const SparsityReport& report);
/// Header: layer,weights,zeros,sparsity followed by a "model" total row.
std::string report_to_csv(const SparsityReport& report);

std::string stats_to_json(const Model& model, std::size_t bins);
/// Header: layer,kind,count,min,max,span,zero_count
std::string stats_to_csv(const Model& model);
/// Long format. Header: layer,bin,lo,hi,count
std::string histograms_to_csv(const Model& model, std::size_t bins);

/// Header: method,delta,s_m,accuracy,normalized_accuracy,compression_factor
std::string curve_to_csv(const TradeoffCurve& curve);

/// Header: layer,params,delta,sparsified_pct followed by a "Total" row.
std::string finetune_to_csv(const FinetuneResult& result);

}  // namespace sparsekit
