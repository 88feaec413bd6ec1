#pragma once

#include "generate.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "labels.hpp"
#include "masp.hpp"
#include "mcsp.hpp"
#include "newick.hpp"
#include "oracle.hpp"
#include "state_space.hpp"
#include "topology.hpp"
#include "tree.hpp"
#include "tree_ops.hpp"
