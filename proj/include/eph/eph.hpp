#pragma once

#include "eph/conversion.hpp"
#include "eph/json_io.hpp"
#include "eph/lieb.hpp"
#include "eph/liouville.hpp"
#include "eph/matrix_core.hpp"
#include "eph/partitions.hpp"
#include "eph/signed_diagrams.hpp"
