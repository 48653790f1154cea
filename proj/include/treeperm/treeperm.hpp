#pragma once

#include "treeperm/base_cases.hpp"
#include "treeperm/engine.hpp"
#include "treeperm/errors.hpp"
#include "treeperm/generators.hpp"
#include "treeperm/graph.hpp"
#include "treeperm/oracle.hpp"
#include "treeperm/scalar.hpp"
#include "treeperm/signs.hpp"
#include "treeperm/subset_convolution.hpp"
#include "treeperm/tensor.hpp"
#include "treeperm/tree_decomposition.hpp"
#include "treeperm/zonotope.hpp"
