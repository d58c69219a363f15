// Copyright 2026 The tunnelbench Authors
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

#include "tunnelbench/bench.hpp"
#include "tunnelbench/brute_force.hpp"
#include "tunnelbench/chimera.hpp"
#include "tunnelbench/constants.hpp"
#include "tunnelbench/error.hpp"
#include "tunnelbench/generators.hpp"
#include "tunnelbench/instance_io.hpp"
#include "tunnelbench/instanton.hpp"
#include "tunnelbench/ising.hpp"
#include "tunnelbench/npp.hpp"
#include "tunnelbench/qmc.hpp"
#include "tunnelbench/quantum.hpp"
#include "tunnelbench/random.hpp"
#include "tunnelbench/sa.hpp"
#include "tunnelbench/schedule.hpp"
#include "tunnelbench/stats.hpp"
