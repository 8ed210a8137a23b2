#include <stdio.h>
#include <string.h>
#include "regcount.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    RcGraph *g = NULL;
    size_t edges[] = {0, 1, 1, 2, 2, 3, 3, 0};
    CHECK(rc_graph_new(4, edges, 4, &g) == RC_STATUS_OK);

    RcPoly *p = NULL;
    CHECK(rc_count_polynomial(g, RC_KIND_MATCHING, &p) == RC_STATUS_OK);
    char *json = NULL;
    CHECK(rc_poly_to_json(p, &json) == RC_STATUS_OK);
    CHECK(strcmp(json, "[\"1\",\"4\",\"2\"]") == 0);
    rc_string_free(json);
    rc_poly_free(p);
    rc_graph_free(g);

    RcSummary s = {0, 0};
    CHECK(rc_verify(RC_CHECK_UMC, 8, 2, RC_FORMAT_JSON, NULL, &s) == RC_STATUS_OK);
    CHECK(s.records == 15 && s.failed == 0);

    CHECK(rc_verify(RC_CHECK_KAHN, 6, 2, RC_FORMAT_JSON, NULL, &s) == RC_STATUS_DIVISIBILITY);
    char *msg = rc_last_error_message();
    CHECK(msg != NULL && strstr(msg, "divisibility") != NULL);
    rc_string_free(msg);

    printf("ok %s\n", rc_version());
    return 0;
}
