#pragma once

#include "warmstart/bounds.hpp"
#include "warmstart/chebyshev.hpp"
#include "warmstart/dense.hpp"
#include "warmstart/experiment.hpp"
#include "warmstart/gmres.hpp"
#include "warmstart/guess.hpp"
#include "warmstart/history.hpp"
#include "warmstart/ilu.hpp"
#include "warmstart/qr.hpp"
#include "warmstart/sketch.hpp"
#include "warmstart/sparse.hpp"
#include "warmstart/svd.hpp"
#include "warmstart/testcase.hpp"
#include "warmstart/vector.hpp"
