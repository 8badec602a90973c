// Copyright 2026 The tqdyn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tqdyn/qops.hpp"
#include "tqdyn/model.hpp"
#include "tqdyn/dynamics.hpp"
#include "tqdyn/disorder.hpp"
#include "tqdyn/measures.hpp"
#include "tqdyn/runner.hpp"
