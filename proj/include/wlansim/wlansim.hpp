#pragma once

#include "wlansim/radio.hpp"
#include "wlansim/traffic.hpp"
#include "wlansim/scenario.hpp"
#include "wlansim/network.hpp"
#include "wlansim/policies.hpp"
#include "wlansim/macsim.hpp"
#include "wlansim/metrics.hpp"
#include "wlansim/harness.hpp"
