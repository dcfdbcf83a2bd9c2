// Copyright 2026 The Gridflow Authors
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


// Umbrella header. Reports (which pull in the JSON library) are separate:
// include "gridflow/report.hpp" explicitly.

#ifndef GRIDFLOW_GRIDFLOW_HPP_
#define GRIDFLOW_GRIDFLOW_HPP_

#include "gridflow/bk.hpp"
#include "gridflow/error.hpp"
#include "gridflow/flow_state.hpp"
#include "gridflow/instance_gen.hpp"
#include "gridflow/io.hpp"
#include "gridflow/oracle.hpp"
#include "gridflow/parallel_bk.hpp"
#include "gridflow/parallel_push_relabel.hpp"
#include "gridflow/push_relabel.hpp"
#include "gridflow/solver.hpp"
#include "gridflow/structured_graph.hpp"
#include "gridflow/surface.hpp"
#include "gridflow/verify.hpp"

#endif  // GRIDFLOW_GRIDFLOW_HPP_
