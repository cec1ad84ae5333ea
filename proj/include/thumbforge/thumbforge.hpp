/*
 * ThumbForge Video Thumbnail Library
 *
 * Copyright 2026 ThumbForge Authors
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */

#pragma once

#include "thumbforge/aesthetics.hpp"
#include "thumbforge/analysis.hpp"
#include "thumbforge/baselines.hpp"
#include "thumbforge/clustering.hpp"
#include "thumbforge/common.hpp"
#include "thumbforge/descriptors.hpp"
#include "thumbforge/evaluation.hpp"
#include "thumbforge/fft.hpp"
#include "thumbforge/frame_io.hpp"
#include "thumbforge/image_ops.hpp"
#include "thumbforge/quality_filter.hpp"
#include "thumbforge/scoring.hpp"
#include "thumbforge/selection.hpp"
