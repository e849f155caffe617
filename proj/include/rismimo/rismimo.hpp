// SPDX-License-Identifier: Apache-2.0
//
// rismimo: joint RIS phase optimization and Type-I precoder selection
// Copyright (C) 2026 The rismimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "rismimo/channel.hpp"
#include "rismimo/codebook.hpp"
#include "rismimo/error.hpp"
#include "rismimo/harness.hpp"
#include "rismimo/link.hpp"
#include "rismimo/linalg.hpp"
#include "rismimo/ris.hpp"
#include "rismimo/risopt.hpp"
#include "rismimo/selector.hpp"
