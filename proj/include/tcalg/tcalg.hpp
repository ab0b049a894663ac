#pragma once

#include "tcalg/blaschke.hpp"
#include "tcalg/circle.hpp"
#include "tcalg/config.hpp"
#include "tcalg/dynamics.hpp"
#include "tcalg/error.hpp"
#include "tcalg/hardy.hpp"
#include "tcalg/tmbasis.hpp"
#include "tcalg/transfer.hpp"
#include "tcalg/truncated_operator.hpp"
#include "tcalg/types.hpp"
#include "tcalg/verify.hpp"
