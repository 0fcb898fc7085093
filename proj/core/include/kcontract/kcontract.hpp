#pragma once

#include "kcontract/certify.hpp"
#include "kcontract/compound.hpp"
#include "kcontract/error.hpp"
#include "kcontract/indexsets.hpp"
#include "kcontract/measures.hpp"
#include "kcontract/serialize.hpp"
#include "kcontract/simulate.hpp"
#include "kcontract/systems.hpp"
