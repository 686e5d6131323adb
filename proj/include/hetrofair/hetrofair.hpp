// Copyright 2026 The HetroFair Authors
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

#include "hetrofair/checkpoint.hpp"
#include "hetrofair/config.hpp"
#include "hetrofair/evaluate.hpp"
#include "hetrofair/graph.hpp"
#include "hetrofair/init.hpp"
#include "hetrofair/interactions.hpp"
#include "hetrofair/kcore.hpp"
#include "hetrofair/labels.hpp"
#include "hetrofair/loss.hpp"
#include "hetrofair/metrics.hpp"
#include "hetrofair/model.hpp"
#include "hetrofair/optimizer.hpp"
#include "hetrofair/pipeline.hpp"
#include "hetrofair/ranking.hpp"
#include "hetrofair/rng.hpp"
#include "hetrofair/sampler.hpp"
#include "hetrofair/split.hpp"
#include "hetrofair/theory.hpp"
#include "hetrofair/trainer.hpp"
