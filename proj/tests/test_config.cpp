#include "doctest.h"
#include "rmi/config.hpp"

TEST_CASE("config json round trip") {
  const auto cfg = rmi::desk_run_config();
  const auto back = rmi::run_config_from_json(rmi::to_json(cfg), rmi::default_run_config());
  CHECK(back.radar == cfg.radar);
  CHECK(back.ranges == cfg.ranges);
}
