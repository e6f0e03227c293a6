#pragma once

#include "llpo/baseline.hpp"
#include "llpo/certifier.hpp"
#include "llpo/generators.hpp"
#include "llpo/llpo_order.hpp"
#include "llpo/parser.hpp"
#include "llpo/proof.hpp"
#include "llpo/qivalue.hpp"
#include "llpo/quasi_interp.hpp"
#include "llpo/rewrite.hpp"
#include "llpo/schema.hpp"
#include "llpo/term.hpp"
#include "llpo/validate.hpp"
