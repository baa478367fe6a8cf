#include <stdio.h>
#include <string.h>

#include "opcong.h"

int main(void) {
    OpcongSeries *gf = NULL;
    OpcongSeries *stream = NULL;
    OpcongCertificate *cert = NULL;
    int64_t c = 0;
    bool matched = false;
    int64_t v2 = 0;

    if (opcong_eta_expand("f2^5 * f1^-10", "exact", 24, &gf) != OPCONG_STATUS_OK) return 1;
    if (opcong_series_extract(gf, 8, 7, &stream) != OPCONG_STATUS_OK) return 2;
    if (opcong_series_coeff_i64(stream, 0, &c) != OPCONG_STATUS_OK || c != 37760) return 3;
    if (opcong_eta_expand("f1^^2", "exact", 4, &gf) != OPCONG_STATUS_PARSE) return 4;
    if (opcong_last_error() == NULL || strstr(opcong_last_error(), "position") == NULL) return 5;
    if (opcong_certificate_builtin(&cert) != OPCONG_STATUS_OK) return 6;
    if (opcong_verify_witness(cert, 30, &matched, &v2) != OPCONG_STATUS_OK || !matched || v2 != 7) return 7;

    opcong_certificate_free(cert);
    opcong_series_free(stream);
    opcong_series_free(gf);
    printf("ok %s\n", opcong_version());
    return 0;
}
