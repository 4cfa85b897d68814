// Copyright 2026 The Proxkit Authors
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

#pragma once

#include "proxkit/bayesopt.hpp"
#include "proxkit/conjugate.hpp"
#include "proxkit/csv.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/friis.hpp"
#include "proxkit/generative.hpp"
#include "proxkit/objectives.hpp"
#include "proxkit/observation_model.hpp"
#include "proxkit/random.hpp"
#include "proxkit/risk.hpp"
#include "proxkit/scenario.hpp"
#include "proxkit/serialize.hpp"
#include "proxkit/shifts.hpp"
#include "proxkit/simulate.hpp"
#include "proxkit/smoother.hpp"
#include "proxkit/trainer.hpp"
#include "proxkit/transform.hpp"
