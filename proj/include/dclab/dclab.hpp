#pragma once

#include "analysis.hpp"
#include "encoding_family.hpp"
#include "families.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "search.hpp"
#include "states.hpp"
