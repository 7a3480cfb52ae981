#pragma once

// Convenience header pulling in the whole library.

#include "errors.hpp"
#include "scalar.hpp"
#include "linalg.hpp"
#include "partcomb.hpp"
#include "basecat.hpp"
#include "interp.hpp"
#include "wreath.hpp"
#include "diagrams.hpp"
#include "structures.hpp"
#include "karoubi.hpp"
#include "algtools.hpp"
#include "random.hpp"
#include "io.hpp"
