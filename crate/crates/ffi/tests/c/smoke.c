#include <stdio.h>
#include <string.h>
#include "nodal_ic.h"

int main(void) {
    const uint64_t degrees[2] = {4, 4};
    NicReport *res = NULL;
    if (nic_koszul(2, degrees, 2, &res) != NIC_STATUS_OK) return 10;
    NicReport *verdict = NULL;
    if (nic_chase(nic_report_json(res), 5, &verdict) != NIC_STATUS_OK) return 11;
    if (!strstr(nic_report_json(verdict), "\"exact_h1\":1")) return 12;
    nic_report_free(verdict);
    nic_report_free(res);

    uint64_t h = 0;
    if (nic_bott_h(2, 2, -3, &h) != NIC_STATUS_OK || h != 1) return 13;

    NicReport *bad = NULL;
    const char *zero = "{\"pairing\": [[0,1],[-1,0]], \"cycles\": [[0,0]], \"h_ambient\": 0}";
    if (nic_ic_stalk(zero, -1, &bad) != NIC_STATUS_PRECONDITION_ERROR || bad != NULL) return 14;
    if (nic_last_error() == NULL) return 15;
    printf("ok %s\n", nic_version());
    return 0;
}
