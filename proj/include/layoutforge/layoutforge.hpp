#pragma once

#include "layoutforge/datagen.hpp"
#include "layoutforge/errors.hpp"
#include "layoutforge/gateway.hpp"
#include "layoutforge/geometry.hpp"
#include "layoutforge/layout.hpp"
#include "layoutforge/metrics.hpp"
#include "layoutforge/pipeline.hpp"
#include "layoutforge/prompts.hpp"
#include "layoutforge/render.hpp"
#include "layoutforge/reward.hpp"
