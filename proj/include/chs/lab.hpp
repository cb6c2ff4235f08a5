#pragma once

#include "chs/chs.hpp"
#include "chs/lab/config.hpp"
#include "chs/lab/experiment.hpp"
#include "chs/lab/registry.hpp"
#include "chs/lab/report.hpp"
#include "chs/lab/runner.hpp"
