#include <math.h>
#include <stdio.h>
#include <string.h>

#include "twopoint_wave.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);      \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  TpwParams p;
  CHECK(tpw_reference_params(&p) == TPW_STATUS_OK);

  uint32_t mask = 99;
  CHECK(tpw_validate_params(&p, true, &mask) == TPW_STATUS_OK && mask == 0);

  TpwDerivedConstants dc;
  CHECK(tpw_derive_constants(&p, NULL, NULL, NULL, &dc) == TPW_STATUS_OK);
  CHECK(fabs(dc.delta - 0.45) < 1e-12);

  TpwSystem *sys = NULL;
  CHECK(tpw_system_new(&p, 9, &sys) == TPW_STATUS_OK);
  CHECK(tpw_system_dim(sys) == 9);

  double c[9], v[9];
  for (int i = 0; i < 9; i++) {
    c[i] = cos(3.141592653589793 * i / 8.0);
    v[i] = 0.0;
  }
  TpwTrajectory *traj = NULL;
  CHECK(tpw_simulate(sys, c, v, 9, 1.0, 0.01, dc.delta, &traj) == TPW_STATUS_OK);
  CHECK(tpw_trajectory_len(traj) == 101);
  TpwEnergySample first, last;
  CHECK(tpw_trajectory_energy(traj, 0, &first) == TPW_STATUS_OK);
  CHECK(tpw_trajectory_energy(traj, 100, &last) == TPW_STATUS_OK);
  CHECK(last.energy < first.energy);
  CHECK(tpw_trajectory_energy(traj, 101, &last) == TPW_STATUS_INVALID_ARGUMENT);
  CHECK(strstr(tpw_last_error_message(), "out of range") != NULL);

  tpw_trajectory_free(traj);
  tpw_system_free(sys);

  p.lt0 = 1.0;
  p.lt1 = 1.5;
  CHECK(tpw_derive_constants(&p, NULL, NULL, NULL, &dc) == TPW_STATUS_DOMAIN);
  CHECK(strstr(tpw_last_error_message(), "cross-damping") != NULL);
  printf("ok %s\n", tpw_version());
  return 0;
}
