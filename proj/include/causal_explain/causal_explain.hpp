/*
 * Copyright 2026 The causal-explain Authors.
 *
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

#pragma once

#include "causal_explain/axioms.hpp"
#include "causal_explain/causal_model.hpp"
#include "causal_explain/causes.hpp"
#include "causal_explain/coalition.hpp"
#include "causal_explain/errors.hpp"
#include "causal_explain/game.hpp"
#include "causal_explain/indices.hpp"
#include "causal_explain/io.hpp"
#include "causal_explain/rational.hpp"
#include "causal_explain/sampling.hpp"
#include "causal_explain/version.hpp"
