#pragma once

#include "pstlab/errors.hpp"
#include "pstlab/graph.hpp"
#include "pstlab/hardcore.hpp"
#include "pstlab/io.hpp"
#include "pstlab/partition.hpp"
#include "pstlab/products.hpp"
#include "pstlab/spectral.hpp"
#include "pstlab/tonks.hpp"
#include "pstlab/verify.hpp"
