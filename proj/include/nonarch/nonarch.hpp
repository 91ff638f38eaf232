#pragma once

#include "nonarch/padic.hpp"
#include "nonarch/linalg.hpp"
#include "nonarch/normspace.hpp"
#include "nonarch/words.hpp"
#include "nonarch/boundedness.hpp"
#include "nonarch/flow.hpp"
#include "nonarch/spaces.hpp"
#include "nonarch/measures.hpp"
#include "nonarch/json_io.hpp"
#include "nonarch/scenarios.hpp"
