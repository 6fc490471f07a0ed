#include <stdio.h>
#include "sparsemul.h"

int main(void) {
    size_t r[] = {0, 1, 2}, c[] = {1, 2, 0};
    int64_t v[] = {1, 1, 1};
    SmMatrix *p = NULL, *q = NULL;
    if (sm_matrix_new("bool", 3, 3, r, c, v, 3, &p) != SM_STATUS_OK) return 1;
    SmOptions o = sm_options_default();
    if (sm_multiply(p, p, &o, &q) != SM_STATUS_OK) return 2;
    size_t rr[3], cc[3];
    int64_t vv[3];
    if (sm_matrix_entries(q, rr, cc, vv, 3) != SM_STATUS_OK) return 3;
    for (int k = 0; k < 3; k++) printf("%zu %zu %lld\n", rr[k], cc[k], (long long)vv[k]);
    SmMatrix *bad = NULL;
    size_t far[] = {5};
    if (sm_matrix_new("bool", 1, 1, far, far, v, 1, &bad) != SM_STATUS_INDEX_OUT_OF_RANGE) return 4;
    if (sm_last_error()[0] == '\0') return 5;
    sm_matrix_free(p);
    sm_matrix_free(q);
    return 0;
}
