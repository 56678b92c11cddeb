#include <stdio.h>
#include <string.h>

#include "ordsum.h"

#define CHECK(cond)                                        \
    do {                                                   \
        if (!(cond)) {                                     \
            fprintf(stderr, "failed: %s\n", #cond);        \
            return 1;                                      \
        }                                                  \
    } while (0)

int main(void) {
    char *g = NULL;
    CHECK(ordsum_g_direct(3, 10, &g) == ORDSUM_STATUS_OK);
    CHECK(strcmp(g, "8") == 0);
    ordsum_string_free(g);

    CHECK(ordsum_g_direct(1, 10, &g) == ORDSUM_STATUS_DOMAIN);
    CHECK(ordsum_last_error() != NULL);

    OrdsumField *k = NULL;
    CHECK(ordsum_field_new(2, &k) == ORDSUM_STATUS_OK);
    char *pk = NULL;
    CHECK(ordsum_pk_direct(k, 10, &pk) == ORDSUM_STATUS_OK);
    CHECK(strcmp(pk, "7") == 0);
    ordsum_string_free(pk);
    uint64_t h = 0, hp = 0;
    CHECK(ordsum_class_number(k, &h, &hp) == ORDSUM_STATUS_OK && h == 1 && hp == 1);
    ordsum_field_free(k);

    uint64_t delta = 0;
    CHECK(ordsum_delta_rationals(10, &delta) == ORDSUM_STATUS_OK && delta == 17);
    printf("ok\n");
    return 0;
}
