/*
 * Copyright (c) 2026, the pnsm authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "pnsm/csv.hpp"
#include "pnsm/embedding.hpp"
#include "pnsm/errors.hpp"
#include "pnsm/field.hpp"
#include "pnsm/generators.hpp"
#include "pnsm/local_spectral.hpp"
#include "pnsm/manifest.hpp"
#include "pnsm/metrics.hpp"
#include "pnsm/neighbors.hpp"
#include "pnsm/projection.hpp"
#include "pnsm/rng.hpp"
#include "pnsm/types.hpp"
#include "pnsm/version.hpp"
