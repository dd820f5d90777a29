// Copyright 2026 The micropol Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the whole toolchain.

#pragma once

#include "micropol/build.hpp"
#include "micropol/common.hpp"
#include "micropol/compile_i2t.hpp"
#include "micropol/compile_s2i.hpp"
#include "micropol/formats.hpp"
#include "micropol/harness.hpp"
#include "micropol/interfaces.hpp"
#include "micropol/interm.hpp"
#include "micropol/library.hpp"
#include "micropol/loader.hpp"
#include "micropol/micropolicy.hpp"
#include "micropol/source.hpp"
#include "micropol/source_eval.hpp"
#include "micropol/source_typing.hpp"
#include "micropol/syntax.hpp"
#include "micropol/tags.hpp"
#include "micropol/target.hpp"
