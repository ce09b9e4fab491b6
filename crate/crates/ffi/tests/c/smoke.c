#include <stdio.h>
#include <string.h>

#include "ballean.h"

int main(void) {
    BalleanDocument *doc = NULL;
    const char *text = "(def Y (gen pow4))\n(def Z (gen two-pow4))\n(check asymptotically-disjoint Y Z)\n";
    if (ballean_document_parse(text, &doc) != BALLEAN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", ballean_last_error());
        return 10;
    }
    BalleanOptions opts = ballean_options_default();
    BalleanReport *report = NULL;
    if (ballean_document_run(doc, &opts, &report) != BALLEAN_STATUS_OK) return 11;
    BalleanRecord rec;
    if (ballean_report_record_count(report) != 1) return 12;
    if (ballean_report_record(report, 0, &rec) != BALLEAN_STATUS_OK) return 13;
    if (rec.verdict != BALLEAN_VERDICT_TRUE) return 14;
    printf("%s", ballean_report_text(report));
    int code = ballean_report_exit_code(report);
    ballean_report_free(report);
    ballean_document_free(doc);

    BalleanDocument *bad = NULL;
    if (ballean_document_parse("(def X (down B))", &bad) != BALLEAN_STATUS_PARSE) return 15;
    if (bad != NULL || strstr(ballean_last_error(), "unresolved name B") == NULL) return 16;
    return code;
}
