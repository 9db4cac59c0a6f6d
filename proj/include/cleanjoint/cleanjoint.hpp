// cleanjoint/cleanjoint.hpp

// Copyright 2026  cleanjoint authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the cleanjoint library.

#pragma once

#include "cleanjoint/error.hpp"
#include "cleanjoint/numeric.hpp"
#include "cleanjoint/rng.hpp"
#include "cleanjoint/matrix.hpp"
#include "cleanjoint/confident_joint.hpp"
#include "cleanjoint/joint_estimation.hpp"
#include "cleanjoint/rank_prune.hpp"
#include "cleanjoint/noise_lab.hpp"
#include "cleanjoint/eval.hpp"
#include "cleanjoint/io.hpp"
