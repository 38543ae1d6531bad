#pragma once

#include "sunits/error.hpp"
#include "sunits/integer.hpp"
#include "sunits/poly.hpp"
#include "sunits/modp.hpp"
#include "sunits/number_field.hpp"
#include "sunits/box.hpp"
#include "sunits/places.hpp"
#include "sunits/dynamics.hpp"
#include "sunits/qscan.hpp"
#include "sunits/reductions.hpp"
#include "sunits/escape.hpp"
#include "sunits/harness.hpp"
#include "sunits/suites.hpp"
