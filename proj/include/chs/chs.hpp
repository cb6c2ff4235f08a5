#pragma once

#include "chs/combinatorics.hpp"
#include "chs/commitment.hpp"
#include "chs/error.hpp"
#include "chs/limits.hpp"
#include "chs/locc.hpp"
#include "chs/numkit.hpp"
#include "chs/pseudorandomness.hpp"
#include "chs/rng.hpp"
#include "chs/typespace.hpp"
