// Copyright 2026 The foodvol Authors.
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

#include "foodvol/cloud.hpp"
#include "foodvol/error.hpp"
#include "foodvol/fixtures.hpp"
#include "foodvol/harness.hpp"
#include "foodvol/kdtree.hpp"
#include "foodvol/mesh.hpp"
#include "foodvol/mesh_io.hpp"
#include "foodvol/metrics.hpp"
#include "foodvol/random.hpp"
#include "foodvol/registration.hpp"
#include "foodvol/scale.hpp"
#include "foodvol/scene_fixture.hpp"
#include "foodvol/topology.hpp"
#include "foodvol/volume.hpp"
