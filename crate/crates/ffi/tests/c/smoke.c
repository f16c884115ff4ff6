#include <math.h>
#include <stdio.h>
#include <string.h>

#include "grover_qss.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    QssState *s1 = NULL, *enc = NULL, *fin = NULL;
    uint32_t m = 0;
    double probs[8];
    char *json = NULL;

    CHECK(qss_catalog_state(1, &s1) == QSS_STATUS_OK);
    CHECK(qss_encode(s1, 6, &enc) == QSS_STATUS_OK);
    CHECK(qss_collective_decode(enc, s1, &fin, &m) == QSS_STATUS_OK);
    CHECK(m == 6);
    CHECK(qss_state_probabilities(fin, probs, 8) == QSS_STATUS_OK);
    CHECK(fabs(probs[6] - 121.0 / 128.0) < 1e-12);

    CHECK(qss_catalog_state(0, &s1) == QSS_STATUS_INVALID_ARGUMENT);
    CHECK(qss_last_error_message() != NULL);

    CHECK(qss_table_json(2, &json) == QSS_STATUS_OK);
    CHECK(strstr(json, "\"rows\"") != NULL);
    qss_string_free(json);

    qss_state_free(s1);
    qss_state_free(enc);
    qss_state_free(fin);
    printf("ok\n");
    return 0;
}
