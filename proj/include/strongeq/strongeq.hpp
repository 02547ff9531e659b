#pragma once

#include "strongeq/discovery.hpp"
#include "strongeq/errors.hpp"
#include "strongeq/json_io.hpp"
#include "strongeq/se_conditions.hpp"
#include "strongeq/se_oracle.hpp"
#include "strongeq/semantics.hpp"
#include "strongeq/simplifier.hpp"
#include "strongeq/syntax.hpp"
