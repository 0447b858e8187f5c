#include <stdio.h>
#include <string.h>
#include "crystal_paths.h"

int main(void) {
    CpCrystal *c = NULL;
    if (cp_crystal_new("A2even", 1, &c) != CP_STATUS_OK) return 1;
    size_t len = 0;
    if (cp_crystal_len(c, &len) != CP_STATUS_OK || len != 3) return 2;
    CpGTable *t = NULL;
    if (cp_gtable_new(c, 2, &t) != CP_STATUS_OK) return 3;
    int64_t mu[2] = {0, 0};
    char *json = NULL;
    if (cp_gtable_get(t, 0, 0, mu, 2, 0, &json) != CP_STATUS_OK) return 4;
    printf("%s\n", json);
    cp_string_free(json);
    if (cp_crystal_new("A1", 0, &c) != CP_STATUS_INVALID_ARGUMENT) return 5;
    if (strlen(cp_last_error()) == 0) return 6;
    cp_gtable_free(t);
    return 0;
}
