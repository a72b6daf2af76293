#pragma once

// Core library: everything except the HTTP service and the CLI.

#include "cvd/color_core.hpp"
#include "cvd/correct.hpp"
#include "cvd/error.hpp"
#include "cvd/histogram.hpp"
#include "cvd/image_io.hpp"
#include "cvd/ishihara.hpp"
#include "cvd/profile.hpp"
#include "cvd/profile_io.hpp"
#include "cvd/simulate.hpp"
#include "cvd/survey.hpp"
