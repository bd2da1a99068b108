#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "wigstab.h"

#define CHECK(call)                                                           \
  do {                                                                        \
    WsStatus s_ = (call);                                                     \
    if (s_ != WS_STATUS_OK) {                                                 \
      fprintf(stderr, "%s: %s (%s)\n", #call, ws_status_str(s_),              \
              ws_last_error());                                               \
      return 1;                                                               \
    }                                                                         \
  } while (0)

int main(void) {
  WsFrame *f = NULL;
  CHECK(ws_frame_new(2, 3, &f));
  CHECK(ws_frame_hadamard(f, 0));
  CHECK(ws_frame_cnot(f, 0, 1));
  bool det = true;
  CHECK(ws_frame_force(f, 0, 1, &det));
  if (det) return 2;

  WsRng *rng = NULL;
  CHECK(ws_rng_new(0, 0, &rng));
  uint32_t outcome = 0;
  CHECK(ws_frame_measure(f, 1, rng, &outcome, &det));
  if (!det || outcome != 1) return 3;

  uint32_t phi[16];
  CHECK(ws_frame_phi(f, phi, 16));
  const uint32_t expected[16] = {1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 2, 1};
  if (memcmp(phi, expected, sizeof phi) != 0) return 4;

  if (ws_frame_cnot(f, 1, 1) != WS_STATUS_INVALID_ARGUMENT) return 5;
  if (strlen(ws_last_error()) == 0) return 6;

  char *text = NULL;
  CHECK(ws_run_circuit("qudits 2 dim 3\nh 1\ncx 1 2\nforce 1 1\nmeasure 2\n",
                       "wigner", 0, 1, false, true, &text));
  int same = strcmp(text, "m 1 1 rnd\nm 2 1 det\n") == 0;
  ws_string_free(text);
  ws_rng_free(rng);
  ws_frame_free(f);
  if (!same) return 7;
  printf("ok %s\n", ws_version());
  return 0;
}
