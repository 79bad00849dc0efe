#include <math.h>
#include <stdio.h>
#include <string.h>

#include "pairsim.h"

#define CHECK(expr)                                                      \
  do {                                                                   \
    if (!(expr)) {                                                       \
      const char *err = ps_last_error();                                 \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #expr,     \
              err ? err : "no error");                                   \
      return 1;                                                          \
    }                                                                    \
  } while (0)

int main(void) {
  PsPcm *pcm = NULL;
  CHECK(ps_pcm_new(2, 0.0, &pcm) == PS_STATUS_OK);
  for (int k = 0; k < 3; k++) CHECK(ps_pcm_record(pcm, 0, 1) == PS_STATUS_OK);
  CHECK(ps_pcm_record(pcm, 1, 0) == PS_STATUS_OK);
  double scores[2];
  CHECK(ps_fit_scores(pcm, PS_SCORING_BT, scores, 2) == PS_STATUS_OK);
  CHECK(fabs(scores[0] - scores[1] - log(3.0)) < 1e-6);
  CHECK(ps_pcm_record(pcm, 1, 1) == PS_STATUS_INVALID_ARGUMENT);
  CHECK(ps_last_error() != NULL);
  ps_pcm_free(pcm);

  PsExperimentConfig cfg = {6, 1, 3, 15, 42, PS_SCORING_BT, 1.0, 1};
  double fractions[] = {0.5, 1.0};
  PsReport *report = NULL;
  CHECK(ps_experiment_run(&cfg, NULL, "swiss,hybrid-mst", fractions, 2, &report) ==
        PS_STATUS_OK);
  size_t rows = 0;
  CHECK(ps_report_row_count(report, &rows) == PS_STATUS_OK && rows == 4);
  PsRow row;
  CHECK(ps_report_row(report, 1, &row) == PS_STATUS_OK);
  CHECK(strcmp(ps_sampler_name(row.sampler), "swiss") == 0 && row.fraction == 1.0);
  char csv[4096];
  size_t len = 0;
  CHECK(ps_report_csv(report, csv, sizeof csv, &len) == PS_STATUS_OK);
  CHECK(strlen(csv) == len);
  ps_report_free(report);
  printf("ok\n");
  return 0;
}
