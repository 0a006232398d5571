// Copyright 2026 The ehrshare Authors
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

// Threshold proxy re-encryption: KEM/DEM hybrid encryption, re-encryption
// key fragments and capsule re-encapsulation.

#include "ehrshare/pre/capsule.hpp"
#include "ehrshare/pre/curve.hpp"
#include "ehrshare/pre/dem.hpp"
#include "ehrshare/pre/entropy.hpp"
#include "ehrshare/pre/fragments.hpp"
#include "ehrshare/pre/hash.hpp"
#include "ehrshare/pre/keys.hpp"
