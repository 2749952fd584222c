#pragma once

#include "ccr/reference.hpp"

namespace brute = ccr::reference;
