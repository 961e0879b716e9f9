#pragma once

#include "mdagkit/classify.hpp"
#include "mdagkit/equivalence.hpp"
#include "mdagkit/errors.hpp"
#include "mdagkit/mdag.hpp"
#include "mdagkit/mixed_graph.hpp"
#include "mdagkit/nested.hpp"
#include "mdagkit/oracle.hpp"
#include "mdagkit/projection.hpp"
#include "mdagkit/separation.hpp"
#include "mdagkit/vertex_set.hpp"
