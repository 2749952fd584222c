#pragma once

#include "ccr/reference.hpp"

namespace oracle = ccr::reference;
