#include <stdio.h>
#include <string.h>
#include "qlo.h"

int main(void) {
    struct QloPoly *poly = NULL;
    const char *json = "{\"n\": 2, \"quad\": [[0, 1, \"1\"]], \"lin\": [], \"const\": \"0\"}";
    if (qlo_poly_parse(json, &poly) != QloStatus_Ok) {
        fprintf(stderr, "parse failed: %s\n", qlo_last_error());
        return 1;
    }
    char *out = NULL;
    if (qlo_poly_histogram(poly, 26, &out) != QloStatus_Ok) {
        fprintf(stderr, "histogram failed: %s\n", qlo_last_error());
        return 1;
    }
    if (!strstr(out, "\"sup_prob\":\"1/2\"")) {
        fprintf(stderr, "unexpected: %s\n", out);
        return 1;
    }
    printf("C consumer ok: %s\n", out);
    qlo_string_free(out);
    qlo_poly_free(poly);

    char *bound = NULL;
    if (qlo_bound_eval("geometric", "d=0,r=2,t=16", &bound) != QloStatus_Ok) {
        fprintf(stderr, "bound failed: %s\n", qlo_last_error());
        return 1;
    }
    printf("bound: %s\n", bound);
    qlo_string_free(bound);
    return 0;
}
