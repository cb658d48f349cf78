#include <math.h>
#include <stdio.h>

#include "creutz/creutz.h"

int main(void) {
  creutz_params p = creutz_default_params();
  creutz_hoppings h;
  creutz_bands* b = NULL;
  double gap = 0.0;
  if (creutz_hoppings_derive(&p, &h) != CREUTZ_OK) return 1;
  if (creutz_bands_compute(&p, 32, 1, &b) != CREUTZ_OK) return 1;
  if (creutz_bands_size(b) != 32) return 1;
  creutz_bands_destroy(b);
  if (creutz_band_gap(&p, 128, &gap) != CREUTZ_OK) return 1;
  if (fabs(gap - 4.0 * fabs(h.t1_mhz)) > 1e-9) return 1;
  if (creutz_hamiltonian_create(NULL, 5, NULL) != CREUTZ_ERR_INVALID_ARGUMENT) return 1;
  printf("creutz %s: gap %.6f MHz\n", creutz_version(), gap);
  return 0;
}
