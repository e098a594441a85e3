#pragma once

#include "synchro/automaton.hpp"
#include "synchro/bit_matrix.hpp"
#include "synchro/config.hpp"
#include "synchro/extract_perm.hpp"
#include "synchro/families.hpp"
#include "synchro/generator.hpp"
#include "synchro/json_io.hpp"
#include "synchro/matrix_set.hpp"
#include "synchro/minimize.hpp"
#include "synchro/partition.hpp"
#include "synchro/permutation.hpp"
#include "synchro/positive_product.hpp"
#include "synchro/primitivity.hpp"
#include "synchro/random.hpp"
#include "synchro/reset_threshold.hpp"
#include "synchro/square_graph.hpp"
#include "synchro/survey.hpp"
