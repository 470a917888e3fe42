#pragma once

#include "haarlip/corpus.hpp"
#include "haarlip/dyadic.hpp"
#include "haarlip/haar.hpp"
#include "haarlip/io.hpp"
#include "haarlip/regularity.hpp"
#include "haarlip/step_function.hpp"
#include "haarlip/tolerance.hpp"
