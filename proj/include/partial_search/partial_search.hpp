#pragma once

#include "partial_search/bounds.hpp"
#include "partial_search/errors.hpp"
#include "partial_search/grk_scan.hpp"
#include "partial_search/parallel.hpp"
#include "partial_search/roots.hpp"
#include "partial_search/search_space.hpp"
#include "partial_search/sequence_search.hpp"
#include "partial_search/statevec.hpp"
#include "partial_search/subspace.hpp"
#include "partial_search/workers.hpp"
