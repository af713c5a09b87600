#pragma once

#include "errors.hpp"
#include "sparse_vector.hpp"
#include "rng.hpp"
#include "jets.hpp"
#include "orlicz.hpp"
#include "tsirelson.hpp"
#include "spaces.hpp"
#include "factorization.hpp"
#include "centralizers.hpp"
#include "derived.hpp"
#include "indicators.hpp"
#include "json_io.hpp"
