#pragma once

#include "roughkit/compare.hpp"
#include "roughkit/error.hpp"
#include "roughkit/esri_ascii.hpp"
#include "roughkit/gridding.hpp"
#include "roughkit/pointcloud.hpp"
#include "roughkit/raster.hpp"
#include "roughkit/raster_types.hpp"
#include "roughkit/render.hpp"
#include "roughkit/roughness.hpp"
