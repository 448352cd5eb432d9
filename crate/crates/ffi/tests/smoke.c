#include <math.h>
#include <stdio.h>
#include <string.h>
#include "specmult.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s\n", #cond);        \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(int argc, char **argv) {
    CHECK(argc == 2);
    CHECK(specmult_experiment_count() > 0);
    CHECK(specmult_experiment_name(specmult_experiment_count()) == NULL);

    SpecmultRiesz *riesz = NULL;
    CHECK(specmult_riesz_new(8, 3, 2, &riesz) == SPECMULT_STATUS_OK);
    double norm = 0.0, lower = 0.0, upper = 0.0;
    CHECK(specmult_riesz_l2_norm(riesz, &norm) == SPECMULT_STATUS_OK);
    CHECK(fabs(norm - sqrt(2.0)) < 1e-12);
    CHECK(specmult_riesz_lp_bounds(riesz, 4.0, 0, &lower, &upper) == SPECMULT_STATUS_OK);
    CHECK(lower > 0.0 && lower <= upper);
    specmult_riesz_free(riesz);

    SpecmultRiesz *bad = NULL;
    CHECK(specmult_riesz_new(8, 1, 3, &bad) == SPECMULT_STATUS_PARAMETER);
    CHECK(bad == NULL && specmult_last_error() != NULL);

    SpecmultConfig *cfg = NULL;
    CHECK(specmult_config_from_json("{\"experiment\": \"cz-suite\", \"system\": {\"trials\": 5}, \"output\": \"x\"}", &cfg)
          == SPECMULT_STATUS_OK);
    CHECK(specmult_config_set_output(cfg, argv[1]) == SPECMULT_STATUS_OK);
    CHECK(specmult_config_set_seed(cfg, 7) == SPECMULT_STATUS_OK);
    SpecmultOutcome *outcome = NULL;
    CHECK(specmult_run(cfg, &outcome) == SPECMULT_STATUS_OK);
    CHECK(specmult_outcome_file_count(outcome) == 2);
    CHECK(strstr(specmult_outcome_file(outcome, 0), "cz-suite.csv") != NULL);
    CHECK(specmult_outcome_flag_count(outcome) == 0);
    specmult_outcome_free(outcome);
    specmult_config_free(cfg);

    printf("ok\n");
    return 0;
}
