#pragma once

#include "edlab/adversary.hpp"
#include "edlab/cluster_profile.hpp"
#include "edlab/core.hpp"
#include "edlab/distinctness.hpp"
#include "edlab/errors.hpp"
#include "edlab/harness.hpp"
#include "edlab/io.hpp"
#include "edlab/oblivious.hpp"
#include "edlab/probe.hpp"
#include "edlab/profiles.hpp"
#include "edlab/set_intersection.hpp"
#include "edlab/sorting.hpp"
#include "edlab/task.hpp"
