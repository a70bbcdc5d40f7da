#pragma once

// vendor/json.hpp ships its own forward-declaration header alongside the
// full one in upstream releases; the vendored copy here is the single
// header, so pull it in directly.
#include "json.hpp"
