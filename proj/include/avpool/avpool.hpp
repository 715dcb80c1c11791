#ifndef AVPOOL_AVPOOL_HPP
#define AVPOOL_AVPOOL_HPP

#include "avpool/core.hpp"
#include "avpool/demand.hpp"
#include "avpool/engine.hpp"
#include "avpool/experiments.hpp"
#include "avpool/io.hpp"
#include "avpool/layout.hpp"
#include "avpool/milp/build.hpp"
#include "avpool/milp/encode.hpp"
#include "avpool/milp/export.hpp"
#include "avpool/milp/model.hpp"
#include "avpool/milp/validate.hpp"
#include "avpool/oracle.hpp"
#include "avpool/rng.hpp"

#endif  // AVPOOL_AVPOOL_HPP
