#pragma once

// Umbrella header for the library (everything except the CLI and HTTP layer).

#include "pidlint/builtin_rules.hpp"
#include "pidlint/condition.hpp"
#include "pidlint/engine.hpp"
#include "pidlint/error.hpp"
#include "pidlint/fixture.hpp"
#include "pidlint/graph.hpp"
#include "pidlint/ingest.hpp"
#include "pidlint/match.hpp"
#include "pidlint/report.hpp"
#include "pidlint/rule.hpp"
#include "pidlint/rule_library.hpp"
#include "pidlint/service.hpp"
#include "pidlint/taxonomy.hpp"
