#pragma once

// convenience umbrella: the whole library in one include

#include "mfsign/version.hpp"
#include "mfsign/errors.hpp"
#include "mfsign/arith.hpp"
#include "mfsign/cyclotomic.hpp"
#include "mfsign/characters.hpp"
#include "mfsign/textio.hpp"
#include "mfsign/rng.hpp"
#include "mfsign/qseries.hpp"
#include "mfsign/halfint.hpp"
#include "mfsign/shimura.hpp"
#include "mfsign/satotate.hpp"
#include "mfsign/density.hpp"
#include "mfsign/report.hpp"
