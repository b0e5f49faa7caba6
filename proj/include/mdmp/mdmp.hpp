#pragma once

#include "mdmp/bench.hpp"
#include "mdmp/detect.hpp"
#include "mdmp/distance.hpp"
#include "mdmp/error.hpp"
#include "mdmp/io.hpp"
#include "mdmp/knn.hpp"
#include "mdmp/metrics.hpp"
#include "mdmp/profile.hpp"
#include "mdmp/series.hpp"
#include "mdmp/synth.hpp"
